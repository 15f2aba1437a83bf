#include "heatasym/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatasym/error.hpp"
#include "heatasym/quadrature.hpp"

namespace heatasym {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

// Cut points graded geometrically around w0, the image of the origin of the
// data. Every catalog profile has its structure at |s| = O(1), which maps to a
// w-interval of width ~1/(2 sqrt(t)); without these cuts a narrow peak can
// slip between the first Kronrod nodes unnoticed.
void add_graded_cuts(std::vector<double>& cuts, double w0, double scale, double window) {
  cuts.push_back(w0);
  for (double d = 0.25 / scale; d < 2.0 * window; d *= 2.0) {
    cuts.push_back(w0 - d);
    cuts.push_back(w0 + d);
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double gaussian_window(double tol, int growth_order) {
  return std::max(8.0, std::sqrt(std::log(1.0 / tol)) + growth_order);
}

OracleResult heat_oracle_1d(const InitialProfile1D& profile, double x, double t, double tol,
                            const OracleOptions& opts) {
  require_positive(t, "t");
  require_positive(tol, "tol");
  if (!std::isfinite(x)) throw std::invalid_argument("x must be finite");

  // Integrate in v = w - w0, where w0 = -x / scale is the image of s = 0.
  // Then s = scale * v exactly; computing s as x + scale * w instead loses
  // digits to cancellation right where the data has its structure.
  const double window = gaussian_window(tol, profile.growth_order());
  const double scale = 2.0 * std::sqrt(t);
  const double w0 = -x / scale;
  std::vector<double> extra;
  for (double b : profile.breakpoints) extra.push_back(b / scale);
  add_graded_cuts(extra, 0.0, scale, window);
  const auto cuts = quad::make_partition(-window - w0, window - w0, extra);

  auto integrand = [&](double v) {
    const double s = scale * v;
    const double val = profile(s);
    if (!std::isfinite(val)) {
      throw NumericalError("heat_oracle_1d: profile '" + profile.name + "' is not finite at s = " +
                           std::to_string(s));
    }
    const double w = w0 + v;
    return val * std::exp(-w * w);
  };
  quad::Options qopts;
  qopts.abs_tol = tol / kInvSqrtPi;
  qopts.max_evals = opts.max_evals;
  qopts.refine_final = opts.double_density;
  const auto r = quad::integrate(integrand, cuts, qopts);
  if (!r.converged) throw NumericalError("heat_oracle_1d: node budget exhausted");
  return {kInvSqrtPi * r.value, kInvSqrtPi * r.error, r.evals};
}

OracleResult heat_oracle_2d(const InitialProfile2D& profile, double x1, double x2, double t, double tol,
                            const OracleOptions& opts) {
  require_positive(t, "t");
  require_positive(tol, "tol");
  if (!std::isfinite(x1) || !std::isfinite(x2)) throw std::invalid_argument("x must be finite");
  if (!profile.evaluate) throw ValidationError("2D profile has no evaluator");

  const double window = gaussian_window(tol, profile.growth_order);
  const double scale = 2.0 * std::sqrt(t);
  // Same shifted variables as in 1D: s_i = scale * v_i, w_i = w0_i + v_i.
  const double w01 = -x1 / scale;
  const double w02 = -x2 / scale;
  const double lower = std::max(-window - w01, 0.0);
  if (!(lower < window - w01)) return {};

  std::size_t nodes = 0;
  double inner_err = 0.0;

  quad::Options inner_opts;
  inner_opts.abs_tol = 0.25 * tol / kInvSqrtPi;
  inner_opts.max_evals = opts.max_evals;
  inner_opts.refine_final = opts.double_density;

  // Transverse integral (1/sqrt(pi)) int Lambda(s1, s2) exp(-w2^2) dw2.
  auto transverse = [&](double s1) {
    const double half = profile.support_halfwidth(s1);
    if (!(half > 0.0)) return 0.0;
    const double lo = std::max(-window - w02, -half / scale);
    const double hi = std::min(window - w02, half / scale);
    if (!(lo < hi)) return 0.0;
    std::vector<double> extra;
    for (double b : profile.breakpoints_x2) extra.push_back(b / scale);
    add_graded_cuts(extra, 0.0, scale, window);
    const auto cuts = quad::make_partition(lo, hi, extra);
    const auto r = quad::integrate(
        [&](double v2) {
          const double v = profile(s1, scale * v2);
          if (!std::isfinite(v)) throw NumericalError("heat_oracle_2d: non-finite profile value");
          const double w2 = w02 + v2;
          return v * std::exp(-w2 * w2);
        },
        cuts, inner_opts);
    nodes += r.evals;
    if (!r.converged) throw NumericalError("heat_oracle_2d: transverse node budget exhausted");
    inner_err = std::max(inner_err, kInvSqrtPi * r.error);
    return kInvSqrtPi * r.value;
  };

  std::vector<double> extra;
  for (double b : profile.breakpoints_x1) extra.push_back(b / scale);
  add_graded_cuts(extra, 0.0, scale, window);
  const auto cuts = quad::make_partition(lower, window - w01, extra);

  quad::Options outer_opts;
  outer_opts.abs_tol = 0.5 * tol / kInvSqrtPi;
  outer_opts.max_evals = opts.max_evals;
  outer_opts.refine_final = opts.double_density;
  const auto r = quad::integrate(
      [&](double v1) {
        const double w1 = w01 + v1;
        return transverse(scale * v1) * std::exp(-w1 * w1);
      },
      cuts, outer_opts);
  nodes += r.evals;
  if (!r.converged) throw NumericalError("heat_oracle_2d: node budget exhausted");
  return {kInvSqrtPi * r.value, kInvSqrtPi * r.error + inner_err, nodes};
}

InitialProfile1D scaling_image(const InitialProfile1D& profile, double lambda) {
  require_positive(lambda, "lambda");
  InitialProfile1D out = profile;
  out.name = profile.name + "@" + std::to_string(lambda);
  out.evaluate = [f = profile.evaluate, lambda](double x) { return f(lambda * x); };
  for (auto* tail : {&out.tail_plus, &out.tail_minus}) {
    for (std::size_t n = 0; n < tail->coefficients.size(); ++n) {
      tail->coefficients[n] *= std::pow(lambda, tail->growth_order - static_cast<int>(n));
    }
  }
  for (double& b : out.breakpoints) b /= lambda;
  return out;
}

}  // namespace heatasym
