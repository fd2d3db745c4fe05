#pragma once

#include <cstddef>
#include <vector>

namespace oneatom {

// Gaussian input pulse Psi_A(x) = exp(-((x-center)/T)^2) / sqrt(N) with
// N = sqrt(pi/2) * T, so the pulse carries unit norm on the whole line.
// Everything is in natural units: Gamma = c = 1, lengths in c/Gamma, and the
// frame co-moves with the pulse, so delay shows up as a shift toward
// negative x.
struct GaussianPulse {
  double pulse_length_T = 1.0;
  double center = 0.0;

  double normalization() const;  // N, recomputed from T on every call
  double amplitude_at(double x) const;
};

// Validates T > 0 and finite center.
GaussianPulse make_gaussian(double pulse_length_T, double center = 0.0);

double evaluate_pulse(const GaussianPulse& pulse, double x);

// Physical cavity parameters behind the effective two-level model.
struct CavityParams {
  double kappa = 0.0;             // cavity linewidth
  double g = 0.0;                 // atom-cavity coupling
  double gamma_noncavity = 0.0;   // decay into non-waveguide modes
  double ratio_threshold = 10.0;  // scale separation demanded of kappa/g and g/gamma
};

// Gamma = g^2 / kappa, the effective relaxation rate after the cavity field
// is adiabatically eliminated.
double effective_gamma(const CavityParams& params);

// True when kappa >= threshold*g and g >= threshold*gamma_noncavity, the
// regime where the single-mode reduction is trustworthy. Callers should warn
// when this returns false.
bool in_bad_cavity_regime(const CavityParams& params);

struct SpatialGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  int point_count = 0;

  double spacing() const { return (x_max - x_min) / (point_count - 1); }
  double x(int i) const { return x_min + spacing() * i; }
};

// Validates bounds and enforces an odd point count of at least 3 (composite
// Simpson panels pair up only on odd counts).
SpatialGrid make_grid(double x_min, double x_max, int point_count);

// Default co-moving window for pulse length T: [-(3T+20), 3T] with spacing
// min(T/40, 0.05), widened to the next even interval count. Covers the pulse
// plus 20 relaxation lengths of trailing reemission.
SpatialGrid default_grid(double pulse_length_T);

struct OnePhotonField {
  SpatialGrid grid;
  std::vector<double> amplitudes;  // amplitudes[i] at grid.x(i)
};

struct TwoPhotonField {
  SpatialGrid grid;
  std::vector<double> amplitudes;  // row-major, [i*point_count + j] at (x_i, x_j)

  double at(int i, int j) const {
    return amplitudes[static_cast<std::size_t>(i) * grid.point_count + j];
  }
  double& at(int i, int j) {
    return amplitudes[static_cast<std::size_t>(i) * grid.point_count + j];
  }
};

OnePhotonField sample_pulse(const GaussianPulse& pulse, const SpatialGrid& grid);

// Symmetric two-photon product state Psi_A(x1) Psi_A(x2).
TwoPhotonField product_state(const GaussianPulse& pulse, const SpatialGrid& grid);

}  // namespace oneatom
