#pragma once

// Extended-precision reference values, coded independently of the library:
// 50-digit arithmetic with Boost's tanh-sinh and Gauss-Kronrod rules.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace mp_oracle {

using real = boost::multiprecision::cpp_bin_float_50;

inline real pi() { return boost::math::constants::pi<real>(); }

inline real erfc_half(const real& x) { return boost::math::erfc(x) / 2; }

template <class F>
real tanh_sinh(F f, const real& a, const real& b) {
  // integrate() is non-const in this Boost release.
  static boost::math::quadrature::tanh_sinh<real> rule(12);
  return rule.integrate(f, a, b, real(1e-40));
}

template <class F>
real kronrod(F f, const real& a, const real& b) {
  return boost::math::quadrature::gauss_kronrod<real, 61>::integrate(f, a, b, 20, real(1e-40));
}

}  // namespace mp_oracle
