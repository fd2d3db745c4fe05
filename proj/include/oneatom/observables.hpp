#pragma once

#include <optional>
#include <stdexcept>

#include "oneatom/scattering.hpp"

namespace oneatom {

// Cut through a two-photon amplitude at fixed photon separation tau,
// parametrized by the mean position s = (x1 + x2) / 2.
struct CrossSection {
  double tau = 0.0;
  std::vector<double> mean_positions;
  std::vector<double> amplitudes;
};

// Refined extremum of |amplitude| along a section. In the co-moving frame a
// later arrival sits at more negative position, hence delay = -peak_position.
struct PeakReport {
  double peak_position = 0.0;
  double peak_value = 0.0;  // signed; sign taken from the unrefined sample
  double delay = 0.0;
  std::optional<double> ratio_to_reference;
};

// Extremum of |amplitude| sits on the first or last sample: the window is too
// small to bracket the peak.
class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Section is too flat against the reference (max |amplitude| under 10% of the
// reference peak): no meaningful peak or delay exists.
class NoPeakError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Samples the field along x2 = x1 + tau by bilinear interpolation, stepping
// the mean position at the grid spacing. Throws std::domain_error when the
// line misses the grid square, std::invalid_argument for tau < 0.
CrossSection cross_section(const TwoPhotonField& field, double tau);

// A one-photon field viewed as a section (tau = 0, positions = grid nodes).
CrossSection as_section(const OnePhotonField& field);

// Locates the sample with maximal |amplitude|, requires it strictly interior,
// then refines position and value with a 3-point parabola through the
// magnitudes. With a reference, also reports the ratio of refined peak values
// and raises NoPeakError when the section is under 10% of the reference peak.
PeakReport find_peak(const CrossSection& section);
PeakReport find_peak(const CrossSection& section, const CrossSection& reference);

// integral |psi|^2 by composite Newton-Cotes. The two-photon version splits
// every row at the diagonal node: the photon-photon term has an |x1 - x2|
// kink there, and integrating across it would degrade the rule to O(h^2).
double field_norm(const OnePhotonField& field);
double field_norm(const TwoPhotonField& field);

// Refined-peak ratios of the output components against psi1 along one
// tau-section. A component that vanishes at double precision reports 0; one
// below 10% of the psi1 peak has no usable extremum and reports nothing.
struct ComponentRatios {
  double tau = 0.0;
  std::optional<double> psi2_over_psi1;
  std::optional<double> psi3_over_psi1;
  std::optional<double> total_over_psi1;
};

ComponentRatios component_ratio_profile(const TwoPhotonDecomposition& decomp,
                                        double tau);

}  // namespace oneatom
