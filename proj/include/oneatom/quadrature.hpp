#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace oneatom {

// Tolerances and budget for the adaptive tail quadrature. Semi-infinite
// integrals are truncated where the exponential weight has decayed by
// tail_cutoff_exponent e-foldings past the lower limit.
struct QuadratureSettings {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-12;
  double tail_cutoff_exponent = 32.0;
  int max_subdivisions = 100000;

  void validate() const;  // throws std::invalid_argument on a bad setting
};

// Raised when the adaptive bisection exhausts its subdivision budget before
// reaching tolerance. Carries the best estimate and a bound on its error so
// callers can decide whether the partial result is still usable.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// Left-to-right pairwise summation. Deterministic for a fixed input order and
// keeps roundoff growth at O(log n) instead of O(n).
double pairwise_sum(std::span<const double> terms);

// Closed Newton-Cotes rule over uniformly spaced samples, any count:
// 0 samples -> 0, 2 -> trapezoid, odd -> composite Simpson, even -> composite
// Simpson plus a 3/8 panel at the right end. Exact for cubics when every
// panel has at least 3 samples (i.e. for 3 or more samples total).
double integrate_piece(std::span<const double> values, double spacing);

// Composite Simpson integral of uniformly spaced samples. Requires at least
// 3 samples; counts that break into Simpson panels unevenly get a 3/8 panel
// at the right end, so the rule stays exact for quadratics in all cases.
double integrate_on_grid(std::span<const double> values, double spacing);

// integral over [lower, inf) of exp(-rate*(s-lower)) * f(s) ds by adaptive
// Simpson bisection on the truncated interval. f must be bounded; the
// truncation point leaves a tail below e^(-tail_cutoff_exponent) * sup|f|.
double exp_weighted_tail_integral(const std::function<double(double)>& f,
                                  double lower, double rate,
                                  const QuadratureSettings& settings = {});

// exp(z^2) * erfc(z). Stable for large positive z where erfc alone
// underflows; grows like 2*exp(z^2) toward negative z.
double scaled_erfc(double z);

}  // namespace oneatom
