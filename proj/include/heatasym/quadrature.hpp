#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace heatasym::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::size_t max_evals = 1'000'000;
  /// Bisect every accepted segment once more before returning (node density x2).
  bool refine_final = false;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (10/21) integration over the partition
/// `cuts` (strictly increasing, at least two points). Each initial piece is
/// refined independently by the global error heap, so integrand kinks should
/// be listed in `cuts`.
///
/// Requested tolerances below the floating-point resolution of the result
/// are clamped: a segment whose Kronrod/Gauss discrepancy is already at the
/// roundoff floor (50 eps * integral of |f|) is never bisected again.
Result integrate(const std::function<double(double)>& f, std::span<const double> cuts,
                 const Options& opts = {});

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// Sorted, de-duplicated partition of [a, b] containing every interior point of `extra`.
std::vector<double> make_partition(double a, double b, std::span<const double> extra);

}  // namespace heatasym::quad
