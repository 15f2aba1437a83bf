#pragma once

// Ground truth: direct quadrature of the heat-kernel convolution.
//
// 1D: u(x,t) = (1/sqrt(pi)) int Lambda(x + 2 sqrt(t) w) exp(-w^2) dw.
// 2D: the tensor analogue with s1 >= 0 and s2 restricted to the support strip.

#include <cstddef>

#include "heatasym/initial_data.hpp"
#include "heatasym/specfun.hpp"

namespace heatasym {

struct OracleResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t nodes_used = 0;
};

struct OracleOptions {
  std::size_t max_evals = kDefaultNodeBudget;
  /// Re-integrate on the converged partition with every segment bisected.
  bool double_density = false;
};

/// Half-width of the w-window: max(8, sqrt(ln(1/tol)) + p).
double gaussian_window(double tol, int growth_order);

OracleResult heat_oracle_1d(const InitialProfile1D& profile, double x, double t, double tol,
                            const OracleOptions& opts = {});

OracleResult heat_oracle_2d(const InitialProfile2D& profile, double x1, double x2, double t, double tol,
                            const OracleOptions& opts = {});

/// x -> Lambda(lambda x), tails c_n -> c_n lambda^{p-n}, breakpoints b -> b/lambda.
InitialProfile1D scaling_image(const InitialProfile1D& profile, double lambda);

}  // namespace heatasym
