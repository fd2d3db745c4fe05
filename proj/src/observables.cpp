#include "oneatom/observables.hpp"

#include <algorithm>
#include <cmath>

#include "oneatom/parallel.hpp"
#include "oneatom/quadrature.hpp"

namespace oneatom {

CrossSection cross_section(const TwoPhotonField& field, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
  const SpatialGrid& g = field.grid;
  const double h = g.spacing();
  const double lo = g.x_min + tau / 2.0;
  const double hi = g.x_max - tau / 2.0;
  if (lo > hi)
    throw std::domain_error("separation tau exceeds the grid window");

  const int count = static_cast<int>(std::floor((hi - lo) / h + 1e-9)) + 1;
  CrossSection section{tau, std::vector<double>(count), std::vector<double>(count)};
  const int n = g.point_count;
  for (int k = 0; k < count; ++k) {
    const double s = lo + h * k;
    const double x1 = s - tau / 2.0;
    const double x2 = s + tau / 2.0;
    const int i = std::min(static_cast<int>((x1 - g.x_min) / h), n - 2);
    const int j = std::min(static_cast<int>((x2 - g.x_min) / h), n - 2);
    const double a = (x1 - g.x(i)) / h;
    const double b = (x2 - g.x(j)) / h;
    section.mean_positions[k] = s;
    section.amplitudes[k] = (1.0 - a) * (1.0 - b) * field.at(i, j) +
                            a * (1.0 - b) * field.at(i + 1, j) +
                            (1.0 - a) * b * field.at(i, j + 1) +
                            a * b * field.at(i + 1, j + 1);
  }
  return section;
}

CrossSection as_section(const OnePhotonField& field) {
  CrossSection section{0.0, std::vector<double>(field.grid.point_count),
                       field.amplitudes};
  for (int i = 0; i < field.grid.point_count; ++i)
    section.mean_positions[i] = field.grid.x(i);
  return section;
}

namespace {

struct RefinedPeak {
  double position;
  double value;
};

RefinedPeak refine_peak(const CrossSection& section) {
  const auto& amp = section.amplitudes;
  if (amp.size() < 3)
    throw std::invalid_argument("peak refinement needs at least 3 samples");
  std::size_t k = 0;
  for (std::size_t i = 1; i < amp.size(); ++i)
    if (std::abs(amp[i]) > std::abs(amp[k])) k = i;
  if (k == 0 || k + 1 == amp.size())
    throw BoundaryError("extremum of |amplitude| sits on the section boundary");

  const double m0 = std::abs(amp[k - 1]);
  const double m1 = std::abs(amp[k]);
  const double m2 = std::abs(amp[k + 1]);
  const double den = m0 - 2.0 * m1 + m2;
  const double shift = den == 0.0 ? 0.0 : 0.5 * (m0 - m2) / den;
  const double h = section.mean_positions[1] - section.mean_positions[0];
  const double magnitude = m1 - 0.25 * (m0 - m2) * shift;
  const double sign = amp[k] < 0.0 ? -1.0 : 1.0;
  return {section.mean_positions[k] + shift * h, sign * magnitude};
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

PeakReport find_peak(const CrossSection& section) {
  const RefinedPeak p = refine_peak(section);
  return PeakReport{p.position, p.value, -p.position, std::nullopt};
}

PeakReport find_peak(const CrossSection& section, const CrossSection& reference) {
  const RefinedPeak ref = refine_peak(reference);
  if (max_abs(section.amplitudes) < 0.1 * std::abs(ref.value))
    throw NoPeakError("section stays below 10% of the reference peak");
  const RefinedPeak p = refine_peak(section);
  return PeakReport{p.position, p.value, -p.position, p.value / ref.value};
}

double field_norm(const OnePhotonField& field) {
  std::vector<double> sq(field.amplitudes.size());
  for (std::size_t i = 0; i < sq.size(); ++i)
    sq[i] = field.amplitudes[i] * field.amplitudes[i];
  return integrate_on_grid(sq, field.grid.spacing());
}

double field_norm(const TwoPhotonField& field) {
  const int n = field.grid.point_count;
  const double h = field.grid.spacing();
  std::vector<double> row_integrals(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    std::vector<double> sq(n);
    const double* row = field.amplitudes.data() + i * static_cast<std::size_t>(n);
    for (int j = 0; j < n; ++j) sq[j] = row[j] * row[j];
    std::span<const double> all(sq);
    row_integrals[i] = integrate_piece(all.first(i + 1), h) +
                       integrate_piece(all.subspan(i), h);
  });
  return integrate_on_grid(row_integrals, h);
}

ComponentRatios component_ratio_profile(const TwoPhotonDecomposition& decomp,
                                        double tau) {
  const CrossSection ref = cross_section(decomp.psi1, tau);
  const RefinedPeak ref_peak = refine_peak(ref);

  auto ratio_of = [&](const TwoPhotonField& component) -> std::optional<double> {
    const CrossSection section = cross_section(component, tau);
    const double peak_scale = max_abs(section.amplitudes);
    // a section this small is zero at double precision, not a weak peak
    if (peak_scale <= 1e-10 * std::abs(ref_peak.value)) return 0.0;
    if (peak_scale < 0.1 * std::abs(ref_peak.value)) return std::nullopt;
    return refine_peak(section).value / ref_peak.value;
  };

  ComponentRatios out;
  out.tau = tau;
  out.psi2_over_psi1 = ratio_of(decomp.psi2);
  out.psi3_over_psi1 = ratio_of(decomp.psi3);
  out.total_over_psi1 = ratio_of(decomp.total);
  return out;
}

}  // namespace oneatom
