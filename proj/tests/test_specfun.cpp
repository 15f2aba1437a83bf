#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatasym/specfun.hpp"
#include "mp_oracle.hpp"

using namespace heatasym;
using mp_oracle::real;

namespace {

double mp_moment(int p, double eta) {
  const real e = eta;
  auto f = [p, e](const real& v) { return pow(v, p) * exp(-(v - e) * (v - e)); };
  const real val = mp_oracle::kronrod(f, real(0), real(std::max(0.0, eta) + 40));
  return (val / sqrt(mp_oracle::pi())).convert_to<double>();
}

// Physicists' Hermite polynomial by its three-term recurrence.
double hermite_poly(int n, double x) {
  double h0 = 1.0, h1 = 2.0 * x;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double mp_j(int n, double eta) {
  const real e = eta;
  auto f = [n, e](const real& z) { return pow(z, -n) * exp(-(z - e) * (z - e)); };
  return mp_oracle::kronrod(f, real(1), real(std::max(1.0, eta) + 40)).convert_to<double>();
}

// Psi_n straight from its definition in 50-digit arithmetic. Tanh-sinh
// samples z down to ~1e-100, where even 50 digits cancel completely; there
// the Taylor tail exp(-eta^2) sum_{k>=n} a_k z^{k-n} is summed instead.
real mp_psi(int n, const real& z, const real& eta) {
  real taylor = 0, tail = 0, a_prev = 0, a = 1;
  for (int k = 0; k < n + 60; ++k) {
    if (k > 0) {
      const real a_next = (2 * eta * a - 2 * a_prev) / k;
      a_prev = a;
      a = a_next;
    }
    if (k < n) {
      taylor += a * pow(z, k);
    } else {
      tail += a * pow(z, k - n);
    }
  }
  if (z < real(1e-3)) return exp(-eta * eta) * tail;
  return (exp(-(z - eta) * (z - eta)) - exp(-eta * eta) * taylor) / pow(z, n);
}

double mp_k(int n, double eta) {
  const real e = eta;
  auto f = [n, e](const real& z) { return mp_psi(n, z, e); };
  return mp_oracle::tanh_sinh(f, real(0), real(1)).convert_to<double>();
}

}  // namespace

TEST_CASE("erfc_half is half the standard function") {
  CHECK(erfc_half(0.0) == 0.5);
  for (double x : {0.3, 1.7}) CHECK(erfc_half(x) + erfc_half(-x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(erfc_half(-2.0) - mp_oracle::erfc_half(real(-2)).convert_to<double>()) < 1e-16);
  for (double x = -6.0; x <= 6.0; x += 0.37) CHECK(std::abs(erfc_half(x) + erfc_half(-x) - 1.0) < 1e-14);
  CHECK(erfc_half(30.0) >= 0.0);
}

TEST_CASE("SelfSimilarPoint keeps x = 2 eta sqrt(t)") {
  const auto p = SelfSimilarPoint::from_xt(3.0, 7.0);
  CHECK(p.eta() == doctest::Approx(3.0 / (2.0 * std::sqrt(7.0))).epsilon(1e-15));
  const auto q = SelfSimilarPoint::from_eta(0.25, 1e4);
  CHECK(q.x() == doctest::Approx(50.0).epsilon(1e-14));
  CHECK_THROWS_AS(SelfSimilarPoint::from_xt(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("Gaussian half-line moments") {
  CHECK(gaussian_halfline_moment(0, 0.0) == 0.5);
  for (double eta : {0.0, 0.5, 2.0}) {
    CHECK(gaussian_halfline_moment(1, eta) - gaussian_halfline_moment(1, -eta) ==
          doctest::Approx(eta).epsilon(1e-14));
    CHECK(gaussian_halfline_moment(2, eta) + gaussian_halfline_moment(2, -eta) ==
          doctest::Approx(eta * eta + 0.5).epsilon(1e-14));
  }
  for (int p = 0; p <= 8; ++p) {
    for (double eta : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
      const double ref = mp_moment(p, eta);
      CAPTURE(p);
      CAPTURE(eta);
      CHECK(gaussian_halfline_moment(p, eta) > 0.0);
      CHECK(std::abs(gaussian_halfline_moment(p, eta) / ref - 1.0) < 1e-10);
    }
  }
  // Strongly negative eta goes through the direct integral.
  CHECK(std::abs(gaussian_halfline_moment(3, -5.0) / mp_moment(3, -5.0) - 1.0) < 1e-10);
}

TEST_CASE("Hermite sums") {
  for (double eta : {-1.5, 0.0, 0.7}) {
    CHECK(hermite_sum(1, eta, SignMode::Alternating) == doctest::Approx(std::exp(-eta * eta)));
    CHECK(hermite_sum(1, eta, SignMode::PaperLiteral) == doctest::Approx(std::exp(-eta * eta)));
  }
  CHECK(hermite_sum(2, 0.0, SignMode::Alternating) == 0.0);
  CHECK(hermite_sum(2, 0.0, SignMode::PaperLiteral) == 0.0);
  CHECK(hermite_sum(3, 1.0) == doctest::Approx(std::exp(-1.0) / 4).epsilon(1e-15));
  CHECK(hermite_sum(3, 1.0, SignMode::PaperLiteral) == doctest::Approx(0.75 * std::exp(-1.0)).epsilon(1e-15));
  // h_n = 2^{1-n}/(n-1)! H_{n-1} exp(-eta^2), no extra sign.
  for (int n = 1; n <= 8; ++n) {
    for (double eta : {-2.0, -0.3, 0.4, 1.9}) {
      const double ref = std::ldexp(1.0, 1 - n) / std::tgamma(n) * hermite_poly(n - 1, eta) * std::exp(-eta * eta);
      CHECK(hermite_sum(n, eta) == doctest::Approx(ref).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(hermite_sum(0, 0.0), std::invalid_argument);
}

TEST_CASE("Hermite ODE closure in Alternating mode") {
  const double h = 1e-3;
  for (int n = 1; n <= 6; ++n) {
    double worst = 0.0;
    for (double eta = -3.0; eta <= 3.0; eta += 0.125) {
      auto f = [n](double e) { return hermite_sum(n, e); };
      const double d1 = (f(eta - 2 * h) - 8 * f(eta - h) + 8 * f(eta + h) - f(eta + 2 * h)) / (12 * h);
      const double d2 =
          (-f(eta - 2 * h) + 16 * f(eta - h) - 30 * f(eta) + 16 * f(eta + h) - f(eta + 2 * h)) / (12 * h * h);
      worst = std::max(worst, std::abs(-0.25 * d2 - 0.5 * eta * d1 - 0.5 * n * f(eta)));
    }
    CAPTURE(n);
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("Taylor coefficients of exp(2 z eta - z^2)") {
  CHECK(taylor_coefficient(0, 0.4) == 1.0);
  CHECK(taylor_coefficient(1, 0.4) == doctest::Approx(0.8));
  CHECK(taylor_coefficient(2, 0.4) == doctest::Approx((4 * 0.16 - 2) / 2));
  for (int k = 0; k <= 10; ++k) {
    CHECK(taylor_coefficient(k, 1.3) == doctest::Approx(hermite_poly(k, 1.3) / std::tgamma(k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("psi_n near and away from the removable singularity") {
  CHECK(psi_n(1, 1.0, 0.0) == doctest::Approx(std::exp(-1.0) - 1.0).epsilon(1e-15));
  for (auto [n, eta] : {std::pair{1, 0.0}, std::pair{2, 1.0}, std::pair{3, -1.0}}) {
    const double limit = std::exp(-eta * eta) * taylor_coefficient(n, eta);
    CHECK(psi_n(n, 0.0, eta) == doctest::Approx(limit));
    for (double z : {1e-12, 1e-8, 1e-5, 1e-3}) {
      const double ref = mp_psi(n, real(z), real(eta)).convert_to<double>();
      CHECK(std::abs(psi_n(n, z, eta) - ref) < 1e-14 * std::max(1.0, std::abs(ref)));
    }
  }
  const double ref = mp_psi(2, real(0.5), real(0.3)).convert_to<double>();
  CHECK(std::abs(psi_n(2, 0.5, 0.3) - ref) < 1e-15);
  for (int n = 1; n <= 8; ++n) {
    for (double z : {0.01, 0.2, 0.9}) {
      for (double eta : {-3.0, 0.5, 3.0}) {
        const double r = mp_psi(n, real(z), real(eta)).convert_to<double>();
        CHECK(std::abs(psi_n(n, z, eta) - r) < 1e-13 * std::max(1.0, std::abs(r)));
      }
    }
  }
  CHECK_THROWS_AS(psi_n(1, -0.1, 0.0), std::invalid_argument);
}

TEST_CASE("J_n against extended-precision quadrature") {
  CHECK(std::abs(j_integral(0, 0.0, 1e-12) - std::sqrt(std::numbers::pi) * erfc_half(1.0)) < 1e-12);
  CHECK(std::abs(j_integral(2, 0.0, 1e-12) - mp_j(2, 0.0)) < 1e-12);
  for (int n = 0; n <= 6; ++n) {
    for (double eta : {-3.0, -0.5, 0.5, 3.0, 12.0}) {
      CAPTURE(n);
      CAPTURE(eta);
      CHECK(std::abs(j_integral(n, eta, 1e-13) - mp_j(n, eta)) < 1e-12);
    }
  }
  double prev = j_integral(0, 0.5, 1e-12);
  for (int n = 1; n <= 8; ++n) {
    const double cur = j_integral(n, 0.5, 1e-12);
    CHECK(cur < prev);
    CHECK(cur > 0.0);
    prev = cur;
  }
}

TEST_CASE("K_n against extended-precision quadrature") {
  // K_1(0) = sum_{k>=1} (-1)^k / (2k k!).
  double series = 0.0, fact = 1.0;
  for (int k = 1; k < 30; ++k) {
    fact *= k;
    series += ((k % 2) ? -1.0 : 1.0) / (2.0 * k * fact);
  }
  CHECK(k_integral(1, 0.0, 1e-10) < 0.0);
  CHECK(std::abs(k_integral(1, 0.0, 1e-10) - series) < 1e-10);
  CHECK(std::abs(k_integral(2, 1.0, 1e-10) - mp_k(2, 1.0)) < 1e-10);
  for (int n = 1; n <= 8; ++n) {
    for (double eta : {-3.0, -1.0, 0.0, 1.5, 3.0}) {
      CAPTURE(n);
      CAPTURE(eta);
      const double k = k_integral(n, eta, 1e-13);
      CHECK(std::isfinite(k));
      CHECK(std::abs(k - mp_k(n, eta)) < 1e-12);
    }
  }
}
