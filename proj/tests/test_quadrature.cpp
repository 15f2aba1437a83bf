#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "heatasym/quadrature.hpp"
#include "mp_oracle.hpp"

namespace quad = heatasym::quad;

TEST_CASE("Kronrod rule integrates low-degree polynomials exactly") {
  const auto r = quad::integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("Gaussian integral matches erf-based closed form") {
  quad::Options opts;
  opts.abs_tol = 1e-14;
  const auto r = quad::integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, opts);
  CHECK(r.converged);
  CHECK(std::abs(r.value - std::sqrt(std::numbers::pi)) < 1e-14);
  // 1e-14 is below the rounding floor of 50 eps per unit of |f| mass, so the
  // estimate settles at that floor (the segment sums of |f| carry their own
  // quadrature error, hence the small allowance).
  CHECK(r.error <= 1.001 * 50.0 * std::numeric_limits<double>::epsilon() * std::sqrt(std::numbers::pi));
}

TEST_CASE("cuts at a kink restore full accuracy") {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const std::vector<double> extra{0.3};
  const auto cuts = quad::make_partition(-1.0, 1.0, extra);
  const auto r = quad::integrate(f, cuts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.5 * (1.3 * 1.3 + 0.7 * 0.7)).epsilon(1e-15));
  CHECK(r.evals == 42);
}

TEST_CASE("adaptive bisection handles an unresolved peak") {
  // Compare against an extended-precision tanh-sinh value.
  auto f = [](double x) { return 1.0 / (1e-4 + x * x); };
  quad::Options opts;
  opts.abs_tol = 1e-9;
  const auto r = quad::integrate(f, -1.0, 2.0, opts);
  using mp_oracle::real;
  const real ref = mp_oracle::tanh_sinh([](const real& x) { return 1 / (real(1e-4) + x * x); }, real(-1), real(0)) +
                   mp_oracle::tanh_sinh([](const real& x) { return 1 / (real(1e-4) + x * x); }, real(0), real(2));
  CHECK(r.converged);
  CHECK(std::abs(r.value - ref.convert_to<double>()) < 1e-9);
}

TEST_CASE("tolerances below roundoff are clamped instead of looping") {
  quad::Options opts;
  opts.abs_tol = 1e-30;
  const auto r = quad::integrate([](double x) { return 1e6 * std::cos(x); }, 0.0, 10.0, opts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1e6 * std::sin(10.0)).epsilon(1e-13));
}

TEST_CASE("node budget exhaustion is reported") {
  quad::Options opts;
  opts.abs_tol = 1e-14;
  opts.max_evals = 100;
  const auto r = quad::integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.evals <= 100 + 42);
}

TEST_CASE("doubling node density stays within the reported error") {
  auto f = [](double x) { return std::exp(-x * x) * std::cos(5 * x); };
  quad::Options opts;
  opts.abs_tol = 1e-12;
  const auto a = quad::integrate(f, -6.0, 6.0, opts);
  opts.refine_final = true;
  const auto b = quad::integrate(f, -6.0, 6.0, opts);
  CHECK(b.evals > a.evals);
  CHECK(std::abs(a.value - b.value) <= std::max(a.error, 1e-15));
}

TEST_CASE("make_partition sorts, de-duplicates and drops outside points") {
  const std::vector<double> extra{0.5, -3.0, 0.5, 0.25, 7.0, 1.0};
  const auto p = quad::make_partition(0.0, 1.0, extra);
  CHECK(p == std::vector<double>{0.0, 0.25, 0.5, 1.0});
}
