#include "oneatom/pulses.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "checks.hpp"
#include "doctest.h"
#include "oneatom/quadrature.hpp"
#include "oracles.hpp"

using namespace oneatom;

TEST_CASE("make_gaussian validates its parameters") {
  CHECK_THROWS_AS(make_gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(1.0, std::nan("")), std::invalid_argument);
  CHECK_NOTHROW(make_gaussian(1e-3, -5.0));
}

TEST_CASE("pulse normalization and peak amplitude") {
  const auto p1 = make_gaussian(1.0);
  CHECK_REL(p1.normalization(), oracle::kNormalizationT1, 1e-14);
  CHECK_REL(p1.amplitude_at(0.0), oracle::kPeakAmplitudeT1, 1e-14);

  const auto p10 = make_gaussian(10.0);
  CHECK_REL(p10.normalization(), oracle::kNormalizationT10, 1e-14);
  CHECK_REL(p10.amplitude_at(0.0), oracle::kPeakAmplitudeT10, 1e-14);
  CHECK(evaluate_pulse(p10, 0.0) == p10.amplitude_at(0.0));
}

TEST_CASE("pulse is even about its center, bit for bit") {
  const auto centered = make_gaussian(2.0);
  const auto offset = make_gaussian(2.0, -1.25);
  for (double d : {0.1, 0.5, 1.0, 3.0, 7.0}) {
    CHECK(centered.amplitude_at(d) == centered.amplitude_at(-d));
    CHECK(offset.amplitude_at(-1.25 + d) == offset.amplitude_at(-1.25 - d));
  }
}

TEST_CASE("pulse carries unit norm") {
  for (double T : {1.0, 10.0}) {
    const auto pulse = make_gaussian(T);
    const int n = 641;
    const double h = 16.0 * T / (n - 1);
    std::vector<double> dens(n);
    for (int i = 0; i < n; ++i) {
      const double a = pulse.amplitude_at(-8.0 * T + h * i);
      dens[i] = a * a;
    }
    INFO("T = " << T);
    CHECK_REL(integrate_on_grid(dens, h), 1.0, 1e-8);
  }
}

TEST_CASE("effective_gamma and the bad-cavity check") {
  CHECK(effective_gamma({1.0, 1.0, 0.0, 10.0}) == 1.0);
  CHECK_REL(effective_gamma({10.0, 2.0, 0.0, 10.0}), 0.4, 1e-15);
  CHECK_REL(effective_gamma({100.0, 3.0, 0.01, 10.0}), 0.09, 1e-15);
  CHECK_THROWS_AS(effective_gamma({0.0, 1.0, 0.0, 10.0}), std::invalid_argument);
  CHECK_THROWS_AS(effective_gamma({-2.0, 1.0, 0.0, 10.0}), std::invalid_argument);
  CHECK_THROWS_AS(effective_gamma({1.0, 0.0, 0.0, 10.0}), std::invalid_argument);

  CHECK(in_bad_cavity_regime({100.0, 3.0, 0.01, 10.0}));
  CHECK_FALSE(in_bad_cavity_regime({100.0, 3.0, 0.5, 10.0}));   // g too close to gamma
  CHECK_FALSE(in_bad_cavity_regime({20.0, 3.0, 0.01, 10.0}));   // kappa too close to g
  CHECK(in_bad_cavity_regime({20.0, 3.0, 0.01, 5.0}));          // looser threshold
}

TEST_CASE("make_grid validates bounds and parity") {
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 4), std::invalid_argument);   // even
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), std::invalid_argument);   // too few
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 5), std::invalid_argument);   // empty span
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 5), std::invalid_argument);   // inverted
  CHECK_THROWS_AS(make_grid(std::nan(""), 1.0, 5), std::invalid_argument);

  const auto g = make_grid(-1.0, 1.0, 5);
  CHECK(g.spacing() == 0.5);
  CHECK(g.x(0) == -1.0);
  CHECK_ABS(g.x(4), 1.0, 1e-15);
}

TEST_CASE("default grid covers the pulse and twenty relaxation lengths") {
  const auto g10 = default_grid(10.0);
  CHECK(g10.x_min == -50.0);
  CHECK(g10.x_max == 30.0);
  CHECK(g10.point_count == 1601);
  CHECK_REL(g10.spacing(), 0.05, 1e-12);

  const auto g1 = default_grid(1.0);
  CHECK(g1.x_min == -23.0);
  CHECK(g1.x_max == 3.0);
  CHECK(g1.point_count == 1041);
  CHECK_REL(g1.spacing(), 0.025, 1e-12);

  for (double T : {0.1, 0.3, 0.7, 2.0, 5.0, 37.0}) {
    const auto g = default_grid(T);
    INFO("T = " << T);
    CHECK(g.point_count % 2 == 1);
    CHECK(g.point_count >= 3);
    CHECK(g.x_min == -(3.0 * T + 20.0));
    CHECK(g.x_max == 3.0 * T);
    CHECK(g.spacing() <= std::min(T / 40.0, 0.05) * (1.0 + 1e-12));
  }
}

TEST_CASE("sample_pulse evaluates the pulse on every node") {
  const auto pulse = make_gaussian(2.0, 0.5);
  const auto grid = make_grid(-6.0, 4.0, 41);
  const auto field = sample_pulse(pulse, grid);
  REQUIRE(field.amplitudes.size() == 41);
  CHECK(field.grid.point_count == 41);
  for (int i = 0; i < 41; ++i)
    CHECK(field.amplitudes[i] == pulse.amplitude_at(grid.x(i)));
}

TEST_CASE("product state is the symmetric tensor square of the pulse") {
  const auto pulse = make_gaussian(1.0);
  const auto grid = make_grid(-8.0, 8.0, 321);
  const auto field = product_state(pulse, grid);
  REQUIRE(field.amplitudes.size() == 321u * 321u);

  for (int i = 0; i < 321; i += 37)
    for (int j = 0; j < 321; j += 23) {
      CHECK(field.at(i, j) == field.at(j, i));
      CHECK(field.at(i, j) ==
            pulse.amplitude_at(grid.x(i)) * pulse.amplitude_at(grid.x(j)));
    }

  // tensor-product norm: nested Simpson is fine here, the integrand is smooth
  std::vector<double> row_norms(321);
  std::vector<double> sq(321);
  for (int i = 0; i < 321; ++i) {
    for (int j = 0; j < 321; ++j) {
      const double a = field.at(i, j);
      sq[j] = a * a;
    }
    row_norms[i] = integrate_on_grid(sq, grid.spacing());
  }
  CHECK_REL(integrate_on_grid(row_norms, grid.spacing()), 1.0, 1e-8);
}
