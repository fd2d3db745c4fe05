#include "oneatom/observables.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "checks.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace oneatom;

namespace {

CrossSection parabola_section(double scale) {
  // scale * (3 - 2 (s - 0.73)^2) on [0, 2]: vertex at 0.73, off the grid
  CrossSection s;
  s.tau = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double x = 0.1 * k;
    s.mean_positions.push_back(x);
    s.amplitudes.push_back(scale * (3.0 - 2.0 * (x - 0.73) * (x - 0.73)));
  }
  return s;
}

TwoPhotonField transpose(const TwoPhotonField& f) {
  TwoPhotonField t{f.grid, std::vector<double>(f.amplitudes.size())};
  const int n = f.grid.point_count;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.at(i, j) = f.at(j, i);
  return t;
}

}  // namespace

TEST_CASE("cross_section of the input product state") {
  const auto pulse = make_gaussian(10.0);
  const auto grid = make_grid(-50.0, 30.0, 801);
  const auto input = product_state(pulse, grid);

  const auto sec = cross_section(input, 0.0);
  REQUIRE(sec.mean_positions.size() == 801);
  CHECK(sec.mean_positions.front() == doctest::Approx(-50.0).epsilon(1e-12));
  CHECK(sec.mean_positions.back() == doctest::Approx(30.0).epsilon(1e-12));

  const auto peak = find_peak(sec);
  CHECK_REL(peak.peak_value, 1.0 / pulse.normalization(), 1e-6);
  CHECK_ABS(peak.peak_position, 0.0, 1e-6);
  CHECK(peak.delay == -peak.peak_position);

  // tau = 5 slice peaks at Psi_A(2.5)^2
  const auto sec5 = cross_section(input, 5.0);
  const auto peak5 = find_peak(sec5);
  CHECK_REL(peak5.peak_value, oracle::kInputSlicePeakTau5T10, 1e-5);
}

TEST_CASE("tau = 0 section equals the diagonal") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = make_grid(-6.0, 3.0, 181);
  const auto d = two_photon_output(pulse, grid);
  const auto sec = cross_section(d.total, 0.0);
  REQUIRE(sec.amplitudes.size() == 181);
  for (int k = 0; k < 181; ++k) {
    CHECK_ABS(sec.amplitudes[k], d.total.at(k, k), 1e-12);
  }
}

TEST_CASE("on-node sections reproduce grid values") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = make_grid(-4.0, 2.0, 61);
  const auto d = two_photon_output(pulse, grid);
  // tau of exactly two spacings: both endpoints of the slice are grid nodes
  const double tau = 2.0 * grid.spacing();
  const auto sec = cross_section(d.total, tau);
  for (size_t k = 0; k < sec.amplitudes.size(); ++k) {
    const int i = static_cast<int>(k);
    CHECK_ABS(sec.amplitudes[k], d.total.at(i, i + 2), 1e-12);
  }
}

TEST_CASE("slicing is symmetric under photon exchange") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = make_grid(-5.0, 3.0, 81);
  const auto d = two_photon_output(pulse, grid);
  const auto flipped = transpose(d.total);
  for (double tau : {0.0, 0.35, 1.0}) {
    const auto a = cross_section(d.total, tau);
    const auto b = cross_section(flipped, tau);
    REQUIRE(a.amplitudes.size() == b.amplitudes.size());
    for (size_t k = 0; k < a.amplitudes.size(); ++k)
      CHECK_ABS(a.amplitudes[k], b.amplitudes[k], 1e-12);
  }
}

TEST_CASE("cross_section rejects bad separations") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = make_grid(-2.0, 2.0, 41);
  const auto input = product_state(pulse, grid);
  CHECK_THROWS_AS(cross_section(input, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(cross_section(input, 4.5), std::domain_error);
  CHECK_NOTHROW(cross_section(input, 4.0));  // single-point slice is legal
}

TEST_CASE("find_peak refines an off-grid parabola exactly") {
  const auto sec = parabola_section(1.0);
  const auto peak = find_peak(sec);
  CHECK_ABS(peak.peak_position, 0.73, 1e-12);
  CHECK_ABS(peak.peak_value, 3.0, 1e-12);
  CHECK_ABS(peak.delay, -0.73, 1e-12);
  CHECK_FALSE(peak.ratio_to_reference.has_value());

  // sign is carried from the sample, magnitude from the refinement
  const auto flipped = find_peak(parabola_section(-1.0));
  CHECK_ABS(flipped.peak_value, -3.0, 1e-12);
  CHECK_ABS(flipped.peak_position, 0.73, 1e-12);
}

TEST_CASE("find_peak against a reference") {
  const auto ref = parabola_section(1.0);
  const auto half = parabola_section(0.5);
  const auto peak = find_peak(half, ref);
  REQUIRE(peak.ratio_to_reference.has_value());
  CHECK_ABS(*peak.ratio_to_reference, 0.5, 1e-12);

  CHECK_THROWS_AS(find_peak(parabola_section(0.05), ref), NoPeakError);
}

TEST_CASE("find_peak error conditions") {
  CrossSection tiny;
  tiny.mean_positions = {0.0, 1.0};
  tiny.amplitudes = {1.0, 2.0};
  CHECK_THROWS_AS(find_peak(tiny), std::invalid_argument);

  CrossSection rising;
  for (int k = 0; k < 10; ++k) {
    rising.mean_positions.push_back(0.1 * k);
    rising.amplitudes.push_back(std::exp(0.3 * k));
  }
  CHECK_THROWS_AS(find_peak(rising), BoundaryError);

  CrossSection falling = rising;
  std::reverse(falling.amplitudes.begin(), falling.amplitudes.end());
  CHECK_THROWS_AS(find_peak(falling), BoundaryError);
}

TEST_CASE("peaks are scale equivariant") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = make_grid(-8.0, 8.0, 321);
  auto field = sample_pulse(pulse, grid);
  const auto base = find_peak(as_section(field));
  CHECK_ABS(base.peak_position, 0.0, 1e-9);

  auto scaled = field;
  for (double& a : scaled.amplitudes) a *= 2.5;
  const auto peak = find_peak(as_section(scaled), as_section(field));
  CHECK_ABS(peak.peak_position, base.peak_position, 1e-12);
  CHECK_ABS(peak.delay, base.delay, 1e-12);
  CHECK_REL(peak.peak_value, 2.5 * base.peak_value, 1e-12);
  CHECK_ABS(*peak.ratio_to_reference, 2.5, 1e-12);
}

TEST_CASE("field norms: unit inputs, outputs, and additivity") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = default_grid(1.0);

  const auto in = sample_pulse(pulse, grid);
  CHECK_REL(field_norm(in), 1.0, 1e-8);

  const auto one = one_photon_output(pulse, grid);
  CHECK_REL(field_norm(one.total), 1.0, 1e-6);

  const auto d = two_photon_output(pulse, grid);
  CHECK_REL(field_norm(d.total), 1.0, 1e-4);

  // the linear part factorizes, so its double norm is the square of the
  // one-photon output norm
  TwoPhotonField linear{grid, d.total.amplitudes};
  const int n = grid.point_count;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) linear.at(i, j) -= d.nonlinear_delta.at(i, j);
  const double n1 = field_norm(one.total);
  CHECK_ABS(field_norm(linear), n1 * n1, 1e-6);

  // scaling the field scales the norm quadratically
  auto scaled = in;
  for (double& a : scaled.amplitudes) a *= 3.0;
  CHECK_REL(field_norm(scaled), 9.0 * field_norm(in), 1e-13);
}

TEST_CASE("component ratios, long pulse") {
  const auto pulse = make_gaussian(10.0);
  const auto grid = make_grid(-50.0, 30.0, 801);
  const auto d = two_photon_output(pulse, grid);

  const auto r0 = component_ratio_profile(d, 0.0);
  REQUIRE(r0.psi2_over_psi1.has_value());
  REQUIRE(r0.psi3_over_psi1.has_value());
  REQUIRE(r0.total_over_psi1.has_value());
  CHECK_ABS(*r0.psi2_over_psi1, oracle::kRatioPsi2Tau0T10, 5e-3);
  CHECK(*r0.psi3_over_psi1 == 0.0);  // exact zero on the diagonal
  CHECK_ABS(*r0.total_over_psi1, oracle::kRatioTotalTau0T10, 5e-3);
  CHECK(*r0.psi2_over_psi1 >= -4.4);
  CHECK(*r0.psi2_over_psi1 <= -3.6);

  const auto r14 = component_ratio_profile(d, 1.4);
  REQUIRE(r14.psi2_over_psi1.has_value());
  REQUIRE(r14.psi3_over_psi1.has_value());
  CHECK_FALSE(r14.total_over_psi1.has_value());  // suppressed, no usable peak
  CHECK_ABS(*r14.psi2_over_psi1, oracle::kRatioPsi2Tau14T10, 5e-3);
  CHECK_ABS(*r14.psi3_over_psi1, oracle::kRatioPsi3Tau14T10, 5e-3);

  const auto r5 = component_ratio_profile(d, 5.0);
  REQUIRE(r5.psi3_over_psi1.has_value());
  REQUIRE(r5.total_over_psi1.has_value());
  CHECK_ABS(*r5.psi3_over_psi1, oracle::kRatioPsi3Tau5T10, 5e-3);
  CHECK(*r5.psi3_over_psi1 >= 3.5);
  CHECK(*r5.psi3_over_psi1 <= 4.4);
  CHECK_ABS(*r5.total_over_psi1, oracle::kRatioTotalTau5T10, 5e-3);

  // delays through find_peak on the same slices
  const auto p0 = find_peak(cross_section(d.total, 0.0), cross_section(d.psi1, 0.0));
  CHECK_ABS(p0.delay, oracle::kDelayTotalTau0T10, 5e-3);
  const auto p5 = find_peak(cross_section(d.total, 5.0), cross_section(d.psi1, 5.0));
  CHECK_ABS(p5.delay, oracle::kDelayTotalTau5T10, 5e-3);

  // the suppressed slice raises the no-peak condition instead
  CHECK_THROWS_AS(
      find_peak(cross_section(d.total, 1.4), cross_section(d.psi1, 1.4)),
      NoPeakError);

  // suppression level itself
  const auto s14 = cross_section(d.total, 1.4);
  double out_max = 0.0;
  for (double a : s14.amplitudes) out_max = std::max(out_max, std::abs(a));
  const auto in_peak = find_peak(cross_section(d.psi1, 1.4));
  CHECK_ABS(out_max / in_peak.peak_value, oracle::kSuppressionTau14T10, 5e-3);
  CHECK(out_max <= 0.1 * in_peak.peak_value);
}

TEST_CASE("component ratios, short pulse") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = make_grid(-23.0, 3.0, 261);
  const auto d = two_photon_output(pulse, grid);

  const auto r0 = component_ratio_profile(d, 0.0);
  REQUIRE(r0.psi2_over_psi1.has_value());
  REQUIRE(r0.total_over_psi1.has_value());
  CHECK_ABS(*r0.psi2_over_psi1, oracle::kRatioPsi2Tau0T1, 5e-3);
  CHECK(*r0.psi2_over_psi1 >= -2.9);
  CHECK(*r0.psi2_over_psi1 <= -2.1);
  CHECK_ABS(*r0.total_over_psi1, oracle::kRatioTotalTau0T1, 5e-3);
  CHECK(*r0.total_over_psi1 >= -1.9);
  CHECK(*r0.total_over_psi1 <= -1.2);

  const auto r1 = component_ratio_profile(d, 1.0);
  REQUIRE(r1.psi2_over_psi1.has_value());
  REQUIRE(r1.psi3_over_psi1.has_value());
  REQUIRE(r1.total_over_psi1.has_value());
  CHECK_ABS(*r1.psi2_over_psi1, oracle::kRatioPsi2Tau1T1, 5e-3);
  CHECK_ABS(*r1.psi3_over_psi1, oracle::kRatioPsi3Tau1T1, 5e-3);
  CHECK_ABS(*r1.total_over_psi1, oracle::kRatioTotalTau1T1, 5e-3);

  const auto p0 = find_peak(cross_section(d.total, 0.0), cross_section(d.psi1, 0.0));
  CHECK_ABS(p0.delay, oracle::kDelayTotalTau0T1, 5e-3);
}
