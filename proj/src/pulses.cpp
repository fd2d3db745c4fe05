#include "oneatom/pulses.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oneatom/parallel.hpp"

namespace oneatom {

double GaussianPulse::normalization() const {
  return std::sqrt(std::numbers::pi / 2.0) * pulse_length_T;
}

double GaussianPulse::amplitude_at(double x) const {
  const double u = (x - center) / pulse_length_T;
  return std::exp(-u * u) / std::sqrt(normalization());
}

GaussianPulse make_gaussian(double pulse_length_T, double center) {
  if (!(pulse_length_T > 0.0) || !std::isfinite(pulse_length_T))
    throw std::invalid_argument("pulse length must be positive and finite");
  if (!std::isfinite(center))
    throw std::invalid_argument("pulse center must be finite");
  return GaussianPulse{pulse_length_T, center};
}

double evaluate_pulse(const GaussianPulse& pulse, double x) {
  return pulse.amplitude_at(x);
}

double effective_gamma(const CavityParams& params) {
  if (!(params.kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(params.g > 0.0)) throw std::invalid_argument("g must be positive");
  return params.g * params.g / params.kappa;
}

bool in_bad_cavity_regime(const CavityParams& params) {
  return params.kappa >= params.ratio_threshold * params.g &&
         params.g >= params.ratio_threshold * params.gamma_noncavity;
}

SpatialGrid make_grid(double x_min, double x_max, int point_count) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw std::invalid_argument("grid bounds must be finite with x_min < x_max");
  if (point_count < 3 || point_count % 2 == 0)
    throw std::invalid_argument("grid needs an odd point count of at least 3");
  return SpatialGrid{x_min, x_max, point_count};
}

SpatialGrid default_grid(double pulse_length_T) {
  if (!(pulse_length_T > 0.0))
    throw std::invalid_argument("pulse length must be positive");
  const double lo = -(3.0 * pulse_length_T + 20.0);
  const double hi = 3.0 * pulse_length_T;
  const double target = std::min(pulse_length_T / 40.0, 0.05);
  int intervals = static_cast<int>(std::ceil((hi - lo) / target));
  if (intervals % 2) ++intervals;
  return make_grid(lo, hi, intervals + 1);
}

OnePhotonField sample_pulse(const GaussianPulse& pulse, const SpatialGrid& grid) {
  OnePhotonField field{grid, std::vector<double>(grid.point_count)};
  for (int i = 0; i < grid.point_count; ++i)
    field.amplitudes[i] = pulse.amplitude_at(grid.x(i));
  return field;
}

TwoPhotonField product_state(const GaussianPulse& pulse, const SpatialGrid& grid) {
  const int n = grid.point_count;
  TwoPhotonField field{grid, std::vector<double>(static_cast<std::size_t>(n) * n)};
  const OnePhotonField samples = sample_pulse(pulse, grid);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double ai = samples.amplitudes[i];
    double* row = field.amplitudes.data() + i * static_cast<std::size_t>(n);
    for (int j = 0; j < n; ++j) row[j] = ai * samples.amplitudes[j];
  });
  return field;
}

}  // namespace oneatom
