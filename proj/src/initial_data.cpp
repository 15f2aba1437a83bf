#include "heatasym/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "heatasym/error.hpp"
#include "heatasym/quadrature.hpp"

namespace heatasym {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Smallest split point for the analytic far tail in regularized_moments. Keeps
// exponentially small, non-power corrections (tanh gates) below 1e-27.
constexpr double kMinFarTailCut = 4.0;

double logistic_gate(double x) {
  // (1 + tanh x) / 2 without cancellation for x -> -inf.
  return 1.0 / (1.0 + std::exp(-2.0 * x));
}

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double int_pow(double x, int k) { return std::pow(x, static_cast<double>(k)); }

std::vector<double> padded(std::vector<double> coeffs) {
  coeffs.resize(kBuiltinTailOrder + 1, 0.0);
  return coeffs;
}

// 1/(1+x^2) ~ x^-2 - x^-4 + x^-6 - ...
std::vector<double> lorentzian_coefficients() {
  std::vector<double> c(kBuiltinTailOrder + 1, 0.0);
  for (int n = 2; n <= kBuiltinTailOrder; n += 2) c[n] = (n / 2) % 2 == 1 ? 1.0 : -1.0;
  return c;
}

// x/(1+x^2) ~ x^-1 - x^-3 + x^-5 - ...
std::vector<double> inverse_coefficients() {
  std::vector<double> c(kBuiltinTailOrder + 1, 0.0);
  for (int n = 1; n <= kBuiltinTailOrder; n += 2) c[n] = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return c;
}

std::vector<double> zeros() { return std::vector<double>(kBuiltinTailOrder + 1, 0.0); }

}  // namespace

const char* to_string(Side side) { return side == Side::Plus ? "plus" : "minus"; }

double AsymptoticTail::coefficient(int n) const {
  if (n < 0 || n > n_max()) {
    throw std::out_of_range("tail coefficient index " + std::to_string(n) + " exceeds n_max " +
                            std::to_string(n_max()));
  }
  return coefficients[static_cast<std::size_t>(n)];
}

double AsymptoticTail::partial_sum(double x, int m_last) const {
  double sum = 0.0;
  for (int m = 0; m <= m_last; ++m) {
    const double c = coefficient(m);
    if (c != 0.0) sum += c * int_pow(x, growth_order - m);
  }
  return sum;
}

int InitialProfile1D::common_n_max() const { return std::min(tail_plus.n_max(), tail_minus.n_max()); }

void check_profile(const InitialProfile1D& profile) {
  if (!profile.evaluate) throw ValidationError("profile '" + profile.name + "' has no evaluator");
  if (profile.tail_plus.growth_order != profile.tail_minus.growth_order) {
    throw ValidationError("profile '" + profile.name + "': tails disagree on growth order");
  }
  if (profile.tail_plus.growth_order < 0) {
    throw ValidationError("profile '" + profile.name + "': negative growth order");
  }
  for (const auto* tail : {&profile.tail_plus, &profile.tail_minus}) {
    if (tail->coefficients.empty()) {
      throw ValidationError("profile '" + profile.name + "': empty tail coefficient sequence");
    }
    for (double c : tail->coefficients) {
      if (!std::isfinite(c)) throw ValidationError("profile '" + profile.name + "': non-finite tail coefficient");
    }
  }
  if (!std::is_sorted(profile.breakpoints.begin(), profile.breakpoints.end())) {
    throw ValidationError("profile '" + profile.name + "': breakpoints must be sorted");
  }
}

InitialProfile1D mirrored(const InitialProfile1D& profile) {
  InitialProfile1D out;
  out.name = "mirror(" + profile.name + ")";
  out.evaluate = [f = profile.evaluate](double x) { return f(-x); };
  const int p = profile.growth_order();
  auto flip = [p](const AsymptoticTail& src, Side side) {
    AsymptoticTail t{side, p, src.coefficients};
    for (std::size_t m = 0; m < t.coefficients.size(); ++m) {
      if ((p - static_cast<int>(m)) % 2 != 0) t.coefficients[m] = -t.coefficients[m];
    }
    return t;
  };
  out.tail_plus = flip(profile.tail_minus, Side::Plus);
  out.tail_minus = flip(profile.tail_plus, Side::Minus);
  for (auto it = profile.breakpoints.rbegin(); it != profile.breakpoints.rend(); ++it) {
    out.breakpoints.push_back(-*it);
  }
  out.bound_hint = profile.bound_hint;
  return out;
}

InitialProfile1D tail_subtracted(const InitialProfile1D& profile) {
  check_profile(profile);
  const int p = profile.growth_order();
  if (profile.common_n_max() < p) {
    throw ValidationError("profile '" + profile.name + "': fewer tail coefficients than its growth order");
  }
  InitialProfile1D out;
  out.name = "remainder(" + profile.name + ")";
  out.evaluate = [f = profile.evaluate, plus = profile.tail_plus, minus = profile.tail_minus,
                  p](double x) {
    if (x > 0.0) return f(x) - plus.partial_sum(x, p);
    if (x < 0.0) return f(x) - minus.partial_sum(x, p);
    return f(x) - 0.5 * (plus.coefficient(p) + minus.coefficient(p));
  };
  auto shift = [p](const AsymptoticTail& src) {
    AsymptoticTail t{src.side, 0, {0.0}};
    for (int n = 1; n + p <= src.n_max(); ++n) t.coefficients.push_back(src.coefficient(n + p));
    return t;
  };
  out.tail_plus = shift(profile.tail_plus);
  out.tail_minus = shift(profile.tail_minus);
  out.breakpoints = profile.breakpoints;
  if (!std::binary_search(out.breakpoints.begin(), out.breakpoints.end(), 0.0)) {
    out.breakpoints.insert(std::upper_bound(out.breakpoints.begin(), out.breakpoints.end(), 0.0), 0.0);
  }
  return out;
}

double phi_remainder(const InitialProfile1D& profile, Side side, int n, double s) {
  if (n < 1) throw std::invalid_argument("phi_remainder: n must be >= 1");
  if (side == Side::Plus ? s < 1.0 : s > -1.0) {
    throw std::invalid_argument("phi_remainder: s must satisfy |s| >= 1 on the requested side");
  }
  const auto& tail = profile.tail(side);
  const int p = tail.growth_order;
  if (n + p > tail.n_max()) {
    throw ValidationError("phi_remainder: n = " + std::to_string(n) + " exceeds available tail coefficients");
  }
  return int_pow(s, n - 1) * (profile(s) - tail.partial_sum(s, n + p));
}

TailValidationReport validate_tails(const InitialProfile1D& profile, std::span<const double> s_grid,
                                    double c_bound) {
  check_profile(profile);
  TailValidationReport report;
  report.c_bound = c_bound;
  const int p = profile.growth_order();
  const int n_top = profile.common_n_max() - p;
  report.worst_ratio.assign(static_cast<std::size_t>(std::max(n_top, 0)), 0.0);

  for (double raw : s_grid) {
    const double mag = std::abs(raw);
    if (mag < 1.0) throw std::invalid_argument("validate_tails: grid points need |s| >= 1");
    for (Side side : {Side::Plus, Side::Minus}) {
      const double s = side == Side::Plus ? mag : -mag;
      const auto& tail = profile.tail(side);
      const double lam = profile(s);
      for (int n = 1; n <= n_top; ++n) {
        double scale = std::abs(lam);
        for (int m = 0; m <= n + p; ++m) scale += std::abs(tail.coefficient(m) * int_pow(s, p - m));
        const double noise = 8.0 * kEps * int_pow(mag, n - 1) * scale * mag * mag;
        if (noise > 0.1 * c_bound) {
          ++report.unresolved;
          continue;
        }
        const double ratio = std::abs(phi_remainder(profile, side, n, s)) * mag * mag;
        auto& worst = report.worst_ratio[static_cast<std::size_t>(n - 1)];
        worst = std::max(worst, ratio);
        if (!(ratio <= c_bound)) {
          report.passed = false;
          report.violations.push_back({n, s, ratio});
        }
      }
    }
  }
  return report;
}

std::vector<double> log_grid(double s_max, int per_decade) {
  std::vector<double> grid;
  const int count = static_cast<int>(std::ceil(std::log10(s_max) * per_decade));
  for (int i = 0; i <= count; ++i) {
    grid.push_back(std::min(s_max, std::pow(10.0, static_cast<double>(i) / per_decade)));
  }
  return grid;
}

TailMoments regularized_moments(const InitialProfile1D& profile, Side side, int n_max, double tol) {
  if (side == Side::Minus) {
    TailMoments m = regularized_moments(mirrored(profile), Side::Plus, n_max, tol);
    m.side = Side::Minus;
    return m;
  }
  check_profile(profile);
  if (profile.growth_order() != 0) {
    throw ValidationError("regularized_moments: profile must be bounded (growth order 0)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("regularized_moments: tol must be positive");
  const auto& tail = profile.tail_plus;
  const int k_last = tail.n_max();
  if (n_max >= k_last) {
    throw ValidationError("regularized_moments: n_max = " + std::to_string(n_max) +
                          " needs more than " + std::to_string(k_last) + " tail coefficients");
  }

  TailMoments out;
  out.side = Side::Plus;
  quad::Options opts;
  opts.abs_tol = tol / 4.0;

  for (int n = 1; n <= n_max; ++n) {
    // int_0^1 s^{n-1} Lambda(s) ds
    const auto near_cuts = quad::make_partition(0.0, 1.0, profile.breakpoints);
    const auto near = quad::integrate(
        [&](double s) { return int_pow(s, n - 1) * profile(s); }, near_cuts, opts);

    // Split point S for int_1^inf Phi_n: below S by quadrature, above S by the
    // tail series integrated term by term. Balance cancellation noise in Phi_n
    // against how far the truncated series is from Lambda beyond S, measured
    // both by the last coefficients and directly (exponentially small
    // corrections such as a smooth gate never show up in the coefficients).
    const double proxy = std::max(std::abs(tail.coefficient(k_last)), std::abs(tail.coefficient(k_last - 1)));
    const double last_break = profile.breakpoints.empty() ? 0.0 : profile.breakpoints.back();
    double best_cut = kMinFarTailCut;
    double best_est = std::numeric_limits<double>::infinity();
    for (double cut = kMinFarTailCut; cut <= 1e12; cut *= 2.0) {
      if (cut <= last_break) continue;
      double scale = std::abs(profile(cut));
      for (int m = 0; m <= n; ++m) scale += std::abs(tail.coefficient(m)) * int_pow(cut, -m);
      const double noise = 2.0 * kEps * int_pow(cut, n) * scale / n;
      const double trunc = proxy * int_pow(cut, n - k_last - 1) / (k_last + 1 - n);
      double defect = 0.0;
      for (double s : {cut, 1.37 * cut}) {
        defect = std::max(defect, std::abs(profile(s) - tail.partial_sum(s, k_last)) * int_pow(s, n));
      }
      const double est = noise + std::max(trunc, defect);
      if (est < best_est) {
        best_est = est;
        best_cut = cut;
      }
    }

    std::vector<double> inv_breaks;
    for (double b : profile.breakpoints) {
      if (b > 1.0 && b < best_cut) inv_breaks.push_back(1.0 / b);
    }
    const auto mid_cuts = quad::make_partition(1.0 / best_cut, 1.0, inv_breaks);
    const auto mid = quad::integrate(
        [&](double v) {
          const double s = 1.0 / v;
          return phi_remainder(profile, Side::Plus, n, s) * s * s;
        },
        mid_cuts, opts);

    double far = 0.0;
    for (int m = n + 1; m <= k_last; ++m) {
      far += tail.coefficient(m) * int_pow(best_cut, n - m) / (m - n);
    }

    double counter = 0.0;
    for (int m = 1; m <= n; ++m) counter += tail.coefficient(n - m) / m;

    const double value = near.value + mid.value + far - counter + tail.coefficient(n) * std::numbers::ln2;
    const double err = near.error + mid.error + best_est;
    if (!near.converged || !mid.converged || !std::isfinite(value) || err > tol) {
      throw NumericalError("regularized_moments: I_" + std::to_string(n) + " of '" + profile.name +
                           "' not certified to tol (estimate " + format_sci(err) + ")");
    }
    out.values.push_back(value);
    out.error_estimates.push_back(err);
  }
  return out;
}

// --- catalog ----------------------------------------------------------------

InitialProfile1D make_const(double c) {
  InitialProfile1D p;
  p.name = "const";
  p.evaluate = [c](double) { return c; };
  p.tail_plus = {Side::Plus, 0, padded({c})};
  p.tail_minus = {Side::Minus, 0, padded({c})};
  p.bound_hint = std::pair{c, c};
  return p;
}

InitialProfile1D make_heaviside() {
  InitialProfile1D p;
  p.name = "heaviside";
  p.evaluate = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); };
  p.tail_plus = {Side::Plus, 0, padded({1.0})};
  p.tail_minus = {Side::Minus, 0, zeros()};
  p.breakpoints = {0.0};
  p.bound_hint = std::pair{0.0, 1.0};
  return p;
}

InitialProfile1D make_linear() {
  InitialProfile1D p;
  p.name = "linear";
  p.evaluate = [](double x) { return x; };
  p.tail_plus = {Side::Plus, 1, padded({1.0})};
  p.tail_minus = {Side::Minus, 1, padded({1.0})};
  return p;
}

InitialProfile1D make_quadratic() {
  InitialProfile1D p;
  p.name = "quadratic";
  p.evaluate = [](double x) { return x * x; };
  p.tail_plus = {Side::Plus, 2, padded({1.0})};
  p.tail_minus = {Side::Minus, 2, padded({1.0})};
  return p;
}

InitialProfile1D make_lorentzian() {
  InitialProfile1D p;
  p.name = "lorentzian";
  p.evaluate = [](double x) { return 1.0 / (1.0 + x * x); };
  p.tail_plus = {Side::Plus, 0, lorentzian_coefficients()};
  p.tail_minus = {Side::Minus, 0, lorentzian_coefficients()};
  p.bound_hint = std::pair{0.0, 1.0};
  return p;
}

InitialProfile1D make_gated_lorentzian() {
  InitialProfile1D p;
  p.name = "gated_lorentzian";
  p.evaluate = [](double x) { return logistic_gate(x) / (1.0 + x * x); };
  p.tail_plus = {Side::Plus, 0, lorentzian_coefficients()};
  p.tail_minus = {Side::Minus, 0, zeros()};
  p.bound_hint = std::pair{0.0, 1.0};
  return p;
}

InitialProfile1D make_gated_inverse() {
  InitialProfile1D p;
  p.name = "gated_inverse";
  p.evaluate = [](double x) { return logistic_gate(x) * x / (1.0 + x * x); };
  p.tail_plus = {Side::Plus, 0, inverse_coefficients()};
  p.tail_minus = {Side::Minus, 0, zeros()};
  p.bound_hint = std::pair{-0.5, 0.5};
  return p;
}

InitialProfile1D make_inverse() {
  InitialProfile1D p;
  p.name = "inverse";
  p.evaluate = [](double x) { return x / (1.0 + x * x); };
  p.tail_plus = {Side::Plus, 0, inverse_coefficients()};
  p.tail_minus = {Side::Minus, 0, inverse_coefficients()};
  p.bound_hint = std::pair{-0.5, 0.5};
  return p;
}

InitialProfile1D make_halfline_power(int power) {
  if (power < 0) throw ValidationError("halfline_power: p must be nonnegative");
  InitialProfile1D p;
  p.name = "halfline_power";
  p.evaluate = [power](double x) {
    if (x > 0.0) return int_pow(x, power);
    if (x < 0.0 || power > 0) return 0.0;
    return 0.5;
  };
  p.tail_plus = {Side::Plus, power, padded({1.0})};
  p.tail_minus = {Side::Minus, power, zeros()};
  p.breakpoints = {0.0};
  if (power == 0) p.bound_hint = std::pair{0.0, 1.0};
  return p;
}

std::vector<BuiltinEntry> builtin_profiles() {
  return {{"const", "c"},          {"heaviside", ""},    {"linear", ""},
          {"quadratic", ""},       {"lorentzian", ""},   {"gated_lorentzian", ""},
          {"gated_inverse", ""},   {"inverse", ""},      {"halfline_power", "p"}};
}

InitialProfile1D make_builtin(const std::string& name, double param) {
  if (name == "const") return make_const(param);
  if (name == "heaviside") return make_heaviside();
  if (name == "linear") return make_linear();
  if (name == "quadratic") return make_quadratic();
  if (name == "lorentzian") return make_lorentzian();
  if (name == "gated_lorentzian") return make_gated_lorentzian();
  if (name == "gated_inverse") return make_gated_inverse();
  if (name == "inverse") return make_inverse();
  if (name == "halfline_power") {
    const double rounded = std::round(param);
    if (rounded != param || param < 0.0) throw ValidationError("halfline_power: p must be a nonnegative integer");
    return make_halfline_power(static_cast<int>(rounded));
  }
  throw ValidationError("unknown builtin profile '" + name + "'");
}

// --- 2D -----------------------------------------------------------------------

double InitialProfile2D::support_halfwidth(double x1) const {
  const double natural = x1 > 0.0 ? std::pow(x1, support_exponent) : 0.0;
  return std::max(natural, transverse_bound);
}

InitialProfile2D make_gated_strip() {
  InitialProfile2D p;
  p.name = "gated_strip";
  p.evaluate = [](double x1, double x2) {
    if (x1 < 1.0 || std::abs(x2) > 1.0) return 0.0;
    return std::tanh(x1 - 1.0);
  };
  p.growth_order = 0;
  p.tail_functions = {{[](double x2) { return std::abs(x2) <= 1.0 ? 1.0 : 0.0; }, 1.0}};
  p.support_exponent = 1.0;
  p.breakpoints_x1 = {1.0};
  p.breakpoints_x2 = {-1.0, 1.0};
  return p;
}

}  // namespace heatasym
