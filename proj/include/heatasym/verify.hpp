#pragma once

// Machine-checkable certificates for the expansion: residual decay slopes
// against the oracle, the termwise heat-operator recurrence, and parabolic
// scaling equivariance.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heatasym/expansion.hpp"
#include "heatasym/initial_data.hpp"

namespace heatasym {

enum class CellStatus { Pass, Fail, Inconclusive, Exact };

const char* to_string(CellStatus status);

struct ConvergenceCell {
  double eta = 0.0;
  int n_max = 0;
  double slope = 0.0;  // NaN unless enough points clear the noise floor
  int points_used = 0;
  CellStatus status = CellStatus::Inconclusive;
};

struct ConvergenceReport {
  std::string profile;
  std::vector<double> eta_values;
  std::vector<double> t_grid;
  std::vector<int> n_max_list;
  /// residuals[(i_eta * n_max_list.size() + i_n) * t_grid.size() + i_t]
  std::vector<double> residuals;
  /// Oracle error estimate per (eta, t), same layout without the N axis.
  std::vector<double> oracle_errors;
  std::vector<ConvergenceCell> cells;  // eta-major, then N

  double residual(std::size_t i_eta, std::size_t i_n, std::size_t i_t) const;
  const ConvergenceCell& cell(std::size_t i_eta, std::size_t i_n) const;
  /// No cell failed. Inconclusive cells do not fail a report.
  bool passed() const;
};

struct ConvergenceOptions {
  SignMode mode = SignMode::Alternating;
  double slope_slack = 0.1;
  /// Residuals at or below floor_factor * max(tol, oracle error) are noise.
  double floor_factor = 10.0;
};

/// residual(eta, t, N) = |oracle - expansion through order N|, slope fitted in
/// log-log over the points above the noise floor (at least 3 needed). A cell
/// is Exact when every residual is within the oracle tolerance itself.
ConvergenceReport convergence_report(const InitialProfile1D& profile, std::span<const double> eta_values,
                                     std::span<const double> t_grid, std::span<const int> n_max_list, double tol,
                                     const ConvergenceOptions& opts = {});

struct RecurrenceResidual {
  double r_log = 0.0;
  double r_plain = 0.0;
};

/// A(f, n) = -f''/4 - (eta/2) f' - (n/2) f with fourth-order central differences.
/// r_log = max |A(H_{n,1}, n)|, r_plain = max |A(H_{n,0}, n) + H_{n,1}| over the grid.
RecurrenceResidual recurrence_residual(const ExpansionTable& table, int n, std::span<const double> eta_grid,
                                       double h_step = 1e-3);

RecurrenceResidual recurrence_residual(const std::function<double(double)>& h_n0,
                                       const std::function<double(double)>& h_n1, int n,
                                       std::span<const double> eta_grid, double h_step = 1e-3);

/// Uniform grid on [lo, hi] with `count` points.
std::vector<double> linear_grid(double lo, double hi, int count);

struct EquivarianceSample {
  double lambda = 1.0;
  double x = 0.0;
  double t = 1.0;
};

struct EquivarianceCheck {
  EquivarianceSample sample;
  double oracle_gap = 0.0;   // |u_lambda(x, t) - u(lambda x, lambda^2 t)|
  double oracle_bound = 0.0; // 2 tol
  double leading_gap = 0.0;  // same for the growing / erfc block of the expansion
  bool passed = false;
};

struct EquivarianceReport {
  bool passed = true;
  std::vector<EquivarianceCheck> checks;
};

EquivarianceReport equivariance_suite(const InitialProfile1D& profile, std::span<const EquivarianceSample> samples,
                                      double tol);

}  // namespace heatasym
