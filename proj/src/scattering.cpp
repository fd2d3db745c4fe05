#include "oneatom/scattering.hpp"

#include <cmath>
#include <numbers>

#include "oneatom/parallel.hpp"

namespace oneatom {

double psi_abs_at(const GaussianPulse& pulse, double x,
                  const QuadratureSettings& /*unused, closed form*/) {
  const double T = pulse.pulse_length_T;
  const double u = x - pulse.center;
  const double z = u / T + T / 2.0;
  const double k = std::sqrt(std::numbers::pi) * T / std::sqrt(pulse.normalization());
  const double gauss = std::exp(-(u / T) * (u / T));
  if (z >= 0.0) return -k * scaled_erfc(z) * gauss;
  // z < 0: erfcx(z) = 2 exp(z^2) - erfcx(-z), and exp(z^2)*gauss folds into
  // exp(u + T^2/4), whose exponent stays below -T^2/4 on this branch.
  return -k * (2.0 * std::exp(u + T * T / 4.0) - scaled_erfc(-z) * gauss);
}

OnePhotonDecomposition one_photon_output(const GaussianPulse& pulse,
                                         const SpatialGrid& grid) {
  OnePhotonDecomposition out{sample_pulse(pulse, grid),
                             OnePhotonField{grid, std::vector<double>(grid.point_count)},
                             OnePhotonField{grid, std::vector<double>(grid.point_count)}};
  for (int i = 0; i < grid.point_count; ++i) {
    out.abs.amplitudes[i] = psi_abs_at(pulse, grid.x(i));
    out.total.amplitudes[i] = out.prop.amplitudes[i] + out.abs.amplitudes[i];
  }
  return out;
}

double nonlinear_delta_at(const GaussianPulse& pulse, double x1, double x2,
                          const QuadratureSettings& /*unused, closed form*/) {
  const double b = psi_abs_at(pulse, std::max(x1, x2));
  return -std::exp(-std::abs(x1 - x2)) * b * b;
}

TwoPhotonDecomposition two_photon_output(const GaussianPulse& pulse,
                                         const SpatialGrid& grid) {
  const int n = grid.point_count;
  const std::size_t total_points = static_cast<std::size_t>(n) * n;
  auto blank = [&] { return TwoPhotonField{grid, std::vector<double>(total_points)}; };
  TwoPhotonDecomposition d{blank(), blank(), blank(), blank(), blank()};

  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = pulse.amplitude_at(grid.x(i));
    b[i] = psi_abs_at(pulse, grid.x(i));
  }

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j < n; ++j) {
      const double bmax = b[std::max(i, j)];
      const double sep = std::abs(grid.x(i) - grid.x(j));
      const double p1 = a[i] * a[j];
      const double p2 = a[i] * b[j] + b[i] * a[j];
      const double delta = -std::exp(-sep) * bmax * bmax;
      const double p3 = b[i] * b[j] + delta;  // exact zero on the diagonal
      d.psi1.at(i, j) = p1;
      d.psi2.at(i, j) = p2;
      d.psi3.at(i, j) = p3;
      d.nonlinear_delta.at(i, j) = delta;
      d.total.at(i, j) = p1 + p2 + p3;
    }
  });
  return d;
}

namespace {

// Double tail integral of the black-box input, outer over the first argument
// from s_from, inner over the second from t_from, both weighted exp(-shift).
double nested_tail(const std::function<double(double, double)>& psi_in,
                   double s_from, double t_from, const QuadratureSettings& outer,
                   const QuadratureSettings& inner) {
  return exp_weighted_tail_integral(
      [&](double s) {
        return exp_weighted_tail_integral([&](double t) { return psi_in(s, t); },
                                          t_from, 1.0, inner);
      },
      s_from, 1.0, outer);
}

// One output point by nested adaptive quadrature of the kernel terms:
//   out(x1,x2) = in(x1,x2) - 2 T1 - 2 T2 + 4 T12 - 4 exp(-|x1-x2|) TD
// where T1, T2 convolve one argument each, T12 convolves both, and TD is the
// photon-photon term with both integrals starting at max(x1, x2). The input
// is sampled as an opaque 2D function inside every integral.
double oracle_point(const std::function<double(double, double)>& psi_in,
                    double x1, double x2, double td,
                    const QuadratureSettings& outer,
                    const QuadratureSettings& inner) {
  const double t1 = exp_weighted_tail_integral(
      [&](double s) { return psi_in(s, x2); }, x1, 1.0, outer);
  const double t2 = exp_weighted_tail_integral(
      [&](double t) { return psi_in(x1, t); }, x2, 1.0, outer);
  const double t12 = nested_tail(psi_in, x1, x2, outer, inner);
  return psi_in(x1, x2) - 2.0 * (t1 + t2) + 4.0 * t12 -
         4.0 * std::exp(-std::abs(x1 - x2)) * td;
}

}  // namespace

TwoPhotonField two_photon_output_oracle(const std::function<double(double)>& pulse,
                                        const SpatialGrid& grid,
                                        const QuadratureSettings& settings) {
  settings.validate();
  QuadratureSettings inner = settings;
  inner.relative_tolerance /= 10.0;
  inner.absolute_tolerance /= 10.0;

  const int n = grid.point_count;
  TwoPhotonField out{grid, std::vector<double>(static_cast<std::size_t>(n) * n)};
  auto psi_in = [&pulse](double u, double v) { return pulse(u) * pulse(v); };

  // TD depends on (x1, x2) only through max(x1, x2), which takes n distinct
  // values on the grid: integrate each once instead of once per point.
  std::vector<double> td_at(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double m = grid.x(static_cast<int>(i));
    td_at[i] = nested_tail(psi_in, m, m, settings, inner);
  });

  // every point computed independently, both triangles included: the
  // symmetry residual of the result is a real convergence diagnostic
  parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t k) {
    const int i = static_cast<int>(k / n);
    const int j = static_cast<int>(k % n);
    out.amplitudes[k] = oracle_point(psi_in, grid.x(i), grid.x(j),
                                     td_at[static_cast<std::size_t>(std::max(i, j))],
                                     settings, inner);
  });
  return out;
}

TwoPhotonDecomposition approx_long_pulse_components(const GaussianPulse& pulse,
                                                    const SpatialGrid& grid) {
  const int n = grid.point_count;
  const std::size_t total_points = static_cast<std::size_t>(n) * n;
  auto blank = [&] { return TwoPhotonField{grid, std::vector<double>(total_points)}; };
  TwoPhotonDecomposition d{blank(), blank(), blank(), blank(), blank()};

  std::vector<double> a(n), ahalf(n), aone(n);
  for (int i = 0; i < n; ++i) {
    a[i] = pulse.amplitude_at(grid.x(i));
    ahalf[i] = pulse.amplitude_at(grid.x(i) + 0.5);
    aone[i] = pulse.amplitude_at(grid.x(i) + 1.0);
  }

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j < n; ++j) {
      const double wedge = std::exp(-std::abs(grid.x(i) - grid.x(j)));
      const double p1 = a[i] * a[j];
      const double p2 = -4.0 * ahalf[i] * ahalf[j];
      const double p3 = 4.0 * aone[i] * aone[j] * (1.0 - wedge);
      d.psi1.at(i, j) = p1;
      d.psi2.at(i, j) = p2;
      d.psi3.at(i, j) = p3;
      d.nonlinear_delta.at(i, j) = -4.0 * aone[i] * aone[j] * wedge;
      d.total.at(i, j) = p1 + p2 + p3;
    }
  });
  return d;
}

}  // namespace oneatom
