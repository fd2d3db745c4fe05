#include "oneatom/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace oneatom {

void QuadratureSettings::validate() const {
  if (!(relative_tolerance > 0.0))
    throw std::invalid_argument("relative_tolerance must be positive");
  if (!(absolute_tolerance > 0.0))
    throw std::invalid_argument("absolute_tolerance must be positive");
  // below ~20 e-foldings the truncated tail would rival the tolerances
  if (!(tail_cutoff_exponent >= 20.0))
    throw std::invalid_argument("tail_cutoff_exponent must be at least 20");
  if (max_subdivisions < 1)
    throw std::invalid_argument("max_subdivisions must be at least 1");
}

double pairwise_sum(std::span<const double> terms) {
  const size_t n = terms.size();
  if (n <= 16) {
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
  }
  const size_t half = n / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

namespace {

// Composite Simpson over an odd number of samples (>= 3).
double simpson_odd(std::span<const double> v, double h) {
  std::vector<double> w(v.size());
  w.front() = v.front();
  w.back() = v.back();
  for (size_t i = 1; i + 1 < v.size(); ++i) w[i] = (i % 2 ? 4.0 : 2.0) * v[i];
  return h / 3.0 * pairwise_sum(w);
}

}  // namespace

double integrate_piece(std::span<const double> values, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  const size_t n = values.size();
  if (n <= 1) return 0.0;
  if (n == 2) return 0.5 * spacing * (values[0] + values[1]);
  if (n % 2 == 1) return simpson_odd(values, spacing);
  // even count: Simpson on the first n-3 samples, 3/8 rule on the last four
  double tail = 3.0 * spacing / 8.0 *
                (values[n - 4] + 3.0 * values[n - 3] + 3.0 * values[n - 2] + values[n - 1]);
  if (n == 4) return tail;
  return simpson_odd(values.first(n - 3), spacing) + tail;
}

double integrate_on_grid(std::span<const double> values, double spacing) {
  if (values.size() < 3)
    throw std::invalid_argument("integrate_on_grid needs at least 3 samples");
  return integrate_piece(values, spacing);
}

namespace {

struct AdaptiveState {
  const std::function<double(double)>& f;
  int remaining;          // subdivision budget
  bool exhausted = false;
  double error_bound = 0.0;  // accumulated Richardson error estimates
};

// Standard adaptive Simpson with Richardson acceptance. Left interval first,
// so the evaluation order (and hence rounding) is reproducible.
double adapt(AdaptiveState& st, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = st.f(0.5 * (a + m));
  const double frm = st.f(0.5 * (m + b));
  const double h12 = (b - a) / 12.0;
  const double left = h12 * (fa + 4.0 * flm + fm);
  const double right = h12 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth >= 60) {
    st.error_bound += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (st.remaining <= 0) {
    st.exhausted = true;
    st.error_bound += std::abs(delta);  // not refined, so no Richardson gain
    return left + right + delta / 15.0;
  }
  st.remaining -= 1;
  const double li = adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
  const double ri = adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  return li + ri;
}

}  // namespace

double exp_weighted_tail_integral(const std::function<double(double)>& f,
                                  double lower, double rate,
                                  const QuadratureSettings& settings) {
  settings.validate();
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
  if (!std::isfinite(lower)) throw std::invalid_argument("lower must be finite");

  const double upper = lower + settings.tail_cutoff_exponent / rate;
  auto g = [&](double s) { return std::exp(-rate * (s - lower)) * f(s); };

  // Seed the adaptive pass with one panel per e-folding of the weight.
  // Bisection alone starts from samples spaced a quarter of the window apart
  // and can accept ~0 for an integrand whose support sits between them; a
  // feature has to be narrower than the weight scale to slip past this seed.
  const int panels = static_cast<int>(std::ceil(settings.tail_cutoff_exponent));
  const double width = (upper - lower) / panels;
  std::vector<double> nodes(2 * static_cast<std::size_t>(panels) + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    nodes[i] = g(lower + 0.5 * width * static_cast<double>(i));

  std::vector<double> panel_estimates(panels);
  for (int k = 0; k < panels; ++k)
    panel_estimates[k] = width / 6.0 *
                         (nodes[2 * k] + 4.0 * nodes[2 * k + 1] + nodes[2 * k + 2]);
  const double whole = pairwise_sum(panel_estimates);
  const double tol = std::max(settings.absolute_tolerance,
                              settings.relative_tolerance * std::abs(whole));

  AdaptiveState st{g, settings.max_subdivisions};
  std::vector<double> refined(panels);
  for (int k = 0; k < panels; ++k) {
    const double a = lower + width * k;
    refined[k] = adapt(st, a, a + width, nodes[2 * k], nodes[2 * k + 1],
                       nodes[2 * k + 2], panel_estimates[k], tol / panels, 0);
  }
  const double result = pairwise_sum(refined);
  if (st.exhausted) {
    const double needed = std::max(settings.absolute_tolerance,
                                   settings.relative_tolerance * std::abs(result));
    if (st.error_bound > needed)
      throw ConvergenceError("exp_weighted_tail_integral: subdivision budget exhausted",
                             result, st.error_bound);
  }
  return result;
}

double scaled_erfc(double z) {
  if (z < 0.0) {
    // erfcx(z) = 2 exp(z^2) - erfcx(-z); the first term dominates quickly
    return 2.0 * std::exp(z * z) - scaled_erfc(-z);
  }
  if (z <= 20.0) return std::exp(z * z) * std::erfc(z);
  // Laplace continued fraction, backward recurrence; converges fast for z > 8
  double t = 0.0;
  for (int n = 40; n >= 1; --n) t = 0.5 * n / (z + t);
  return std::numbers::inv_sqrtpi / (z + t);
}

}  // namespace oneatom
