#include "heatasym/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatasym/error.hpp"
#include "heatasym/quadrature.hpp"

namespace heatasym {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

const char* to_string(SignMode mode) {
  return mode == SignMode::Alternating ? "alternating" : "paper_literal";
}

SelfSimilarPoint SelfSimilarPoint::from_xt(double x, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive and finite");
  require_finite(x, "x");
  return {x / (2.0 * std::sqrt(t)), t, x};
}

SelfSimilarPoint SelfSimilarPoint::from_eta(double eta, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive and finite");
  require_finite(eta, "eta");
  return {eta, t, 2.0 * eta * std::sqrt(t)};
}

double erfc_half(double x) { return 0.5 * std::erfc(x); }

double gaussian_halfline_moment(int p, double eta) {
  if (p < 0) throw std::invalid_argument("gaussian_halfline_moment: p must be nonnegative");
  if (eta < -2.0 && p >= 1) {
    // Upward recurrence loses digits here; integrate the definition directly.
    const double upper = std::sqrt(static_cast<double>(p)) + 12.0;
    auto f = [p, eta](double v) { return std::pow(v, p) * std::exp(-(v - eta) * (v - eta)); };
    quad::Options opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-15;
    const auto r = quad::integrate(f, 0.0, upper, opts);
    return kInvSqrtPi * r.value;
  }
  double g0 = erfc_half(-eta);
  if (p == 0) return g0;
  double g1 = eta * g0 + 0.5 * kInvSqrtPi * std::exp(-eta * eta);
  for (int k = 2; k <= p; ++k) {
    const double g2 = eta * g1 + 0.5 * (k - 1) * g0;
    g0 = g1;
    g1 = g2;
  }
  return g1;
}

double hermite_sum(int n, double eta, SignMode mode) {
  if (n < 1) throw std::invalid_argument("hermite_sum: n must be >= 1");
  const double gauss = std::exp(-eta * eta);
  double sum = 0.0;
  double four_k_fact = 1.0;  // 4^k k!
  for (int k = 0; 2 * k <= n - 1; ++k) {
    if (k > 0) four_k_fact *= 4.0 * k;
    const int power = n - 2 * k - 1;
    const double term = std::pow(eta, power) / (four_k_fact * std::tgamma(power + 1.0));
    sum += (mode == SignMode::Alternating && (k % 2 == 1)) ? -term : term;
  }
  return sum * gauss;
}

double taylor_coefficient(int k, double eta) {
  if (k < 0) throw std::invalid_argument("taylor_coefficient: k must be >= 0");
  double prev = 1.0;  // a_0
  if (k == 0) return prev;
  double cur = 2.0 * eta;  // a_1
  for (int j = 2; j <= k; ++j) {
    const double next = (2.0 * eta * cur - 2.0 * prev) / j;
    prev = cur;
    cur = next;
  }
  return cur;
}

double psi_n(int n, double z, double eta) {
  if (n < 1) throw std::invalid_argument("psi_n: n must be >= 1");
  if (z < 0.0) throw std::invalid_argument("psi_n: z must be >= 0");
  require_finite(eta, "eta");
  const double gauss = std::exp(-eta * eta);
  if (z == 0.0) return gauss * taylor_coefficient(n, eta);

  // One pass over the Taylor coefficients a_k: the head (k < n) feeds the
  // direct formula, the tail (k >= n) is the series representation of Psi_n.
  const bool series_usable = std::abs(eta) * z < 40.0;
  double head = 0.0;
  double head_abs = 0.0;
  double tail = 0.0;
  double tail_abs = 0.0;
  double a_prev = 0.0;
  double a_cur = 1.0;
  double zk = 1.0;  // z^k for the head, z^{k-n} for the tail
  const int k_floor = n + static_cast<int>(std::ceil(3.0 * (2.0 * std::abs(eta) * z + z * z))) + 20;
  const int k_cap = series_usable ? n + 600 : n - 1;
  for (int k = 0; k <= k_cap; ++k) {
    if (k > 0) {
      const double a_next = (k == 1) ? 2.0 * eta : (2.0 * eta * a_cur - 2.0 * a_prev) / k;
      a_prev = a_cur;
      a_cur = a_next;
    }
    if (k < n) {
      const double term = a_cur * zk;
      head += term;
      head_abs += std::abs(term);
      zk *= z;
      if (k == n - 1) zk = 1.0;
    } else {
      const double term = a_cur * zk;
      tail += term;
      tail_abs += std::abs(term);
      zk *= z;
      if (k > k_floor && std::abs(term) <= 1e-18 * tail_abs) break;
    }
  }

  const double peak = std::exp(-(z - eta) * (z - eta));
  const double zn = std::pow(z, n);
  const double direct = (peak - gauss * head) / zn;
  const double direct_err = kEps * (peak + gauss * head_abs) / zn;
  if (!series_usable) return direct;
  const double series = gauss * tail;
  const double series_err = kEps * gauss * tail_abs * 4.0;
  return series_err <= direct_err ? series : direct;
}

double j_integral(int n, double eta, double tol, std::size_t max_evals) {
  if (n < 0) throw std::invalid_argument("j_integral: n must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("j_integral: tol must be positive");
  require_finite(eta, "eta");
  // exp(-(z - eta)^2) < exp(-100) beyond the upper cut.
  const double upper = std::max(1.0, eta) + 10.0;
  const double interior[] = {eta};
  const auto cuts = quad::make_partition(1.0, upper, interior);
  auto f = [n, eta](double z) { return std::pow(z, -n) * std::exp(-(z - eta) * (z - eta)); };
  quad::Options opts;
  opts.abs_tol = tol;
  opts.max_evals = max_evals;
  const auto r = quad::integrate(f, cuts, opts);
  if (!r.converged) throw NumericalError("j_integral: tolerance unreachable within node budget");
  return r.value;
}

double k_integral(int n, double eta, double tol, std::size_t max_evals) {
  if (n < 1) throw std::invalid_argument("k_integral: n must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("k_integral: tol must be positive");
  require_finite(eta, "eta");
  auto f = [n, eta](double z) { return psi_n(n, z, eta); };
  quad::Options opts;
  opts.abs_tol = tol;
  opts.max_evals = max_evals;
  const auto r = quad::integrate(f, 0.0, 1.0, opts);
  if (!r.converged) throw NumericalError("k_integral: tolerance unreachable within node budget");
  return r.value;
}

}  // namespace heatasym
