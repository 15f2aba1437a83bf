#pragma once

// Long-time expansion of the Cauchy problem u_t = u_xx, u(x, 0) = Lambda(x):
//
//   u ~ c-_0 erfc_half(eta) + c+_0 erfc_half(-eta)
//       + sum_{n>=1} t^{-n/2} (H_{n,0}(eta) + H_{n,1}(eta) ln t),   eta = x / (2 sqrt t),
//
// for bounded data, and the growing block sum_{m<=p} t^{(p-m)/2} (...) for data
// of growth order p. H_{n,1} is a multiple of the Hermite sum h_n. H_{n,0}
// is a structured sum over a small basis (J_n + K_n, h_k, erfc_half); its
// constant bookkeeping is fixed by AssemblyConvention.

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heatasym/initial_data.hpp"
#include "heatasym/specfun.hpp"

namespace heatasym {

// --- assembly convention --------------------------------------------------------

/// How the Minus-side moment enters the h_n term: eps_n = (-1)^{n-1}, 1, or (-1)^n.
enum class MinusParity { OddSign, Unit, EvenSign };

/// Log multiplier: (c+_n - c-_n) literally, or (c+_n - (-1)^n c-_n).
enum class LogDifference { Literal, Alternating };

struct AssemblyConvention {
  MinusParity minus_parity = MinusParity::OddSign;
  /// c_n ln 2 stays inside I_n (ln sigma = ln 2 + ln mu + ln t / 2).
  bool fold_ln2 = true;
  /// Keep the finite-part constants sum_{r<n-1} 2^r h_{r+1} / (r - n + 1) that
  /// regularizing int_mu^1 z^{r-n} dz leaves behind.
  bool finite_part_terms = true;
  LogDifference log_difference = LogDifference::Literal;

  bool operator==(const AssemblyConvention&) const = default;
};

/// Winner of calibrate_assembly, frozen. Regression-tested in test_calibration.
inline constexpr AssemblyConvention kCalibratedConvention{MinusParity::OddSign, true, true,
                                                          LogDifference::Literal};

std::string describe(const AssemblyConvention& convention);

/// All 24 combinations of the free choices above.
std::vector<AssemblyConvention> candidate_conventions();

// --- expansion table ----------------------------------------------------------

enum class TermKind { ErfcHalf, JPlusK, Hermite };

/// coefficient * f(arg) with arg = -eta when reflected, eta otherwise, and
///   ErfcHalf: erfc_half(-arg);  JPlusK: J_index(arg) + K_index(arg);
///   Hermite: hermite_sum(index, arg, mode).
struct BasisTerm {
  TermKind kind = TermKind::Hermite;
  int index = 0;
  bool reflected = false;
  double coefficient = 0.0;
};

struct ExpansionOrder {
  int n = 0;
  std::vector<BasisTerm> plain_terms;  // H_{n,0}
  double log_multiplier = 0.0;         // H_{n,1} = log_multiplier * hermite_sum(n, eta, mode)
};

struct TableOptions {
  double moment_tol = 1e-10;
  /// Absolute tolerance for each J_n / K_n evaluation.
  double integral_tol = 1e-15;
};

class ExpansionTable {
 public:
  /// Bounded profiles only (growth order 0). n_max may be 0 (erfc block only).
  static ExpansionTable build(const InitialProfile1D& profile, int n_max, SignMode mode = SignMode::Alternating,
                              const TableOptions& opts = {},
                              const AssemblyConvention& convention = kCalibratedConvention);

  /// Same, reusing precomputed moments (n_max <= moments' length).
  static ExpansionTable build(const InitialProfile1D& profile, const TailMoments& plus, const TailMoments& minus,
                              int n_max, SignMode mode, const TableOptions& opts,
                              const AssemblyConvention& convention);

  int n_max() const { return static_cast<int>(orders_.size()); }
  SignMode mode() const { return mode_; }
  const AssemblyConvention& convention() const { return convention_; }
  const std::vector<BasisTerm>& leading_terms() const { return leading_; }
  const ExpansionOrder& order(int n) const;
  const TailMoments& moments(Side side) const { return side == Side::Plus ? plus_ : minus_; }

  double leading(double eta) const;
  double h_n0(int n, double eta) const;
  double h_n1(int n, double eta) const;
  double evaluate_eta(double eta, double t, int n_max) const;
  double evaluate(double x, double t, int n_max) const;

 private:
  double term_value(const BasisTerm& term, double eta) const;

  std::vector<BasisTerm> leading_;
  std::vector<ExpansionOrder> orders_;
  TailMoments plus_;
  TailMoments minus_;
  SignMode mode_ = SignMode::Alternating;
  AssemblyConvention convention_{};
  double integral_tol_ = 1e-15;
};

/// Growing block plus decaying expansion for any growth order p >= 0.
///
/// p = 0: the table of Lambda itself. p >= 1: the monomial tails
/// c_m s^{p-m} are solved exactly through Gaussian half-line moments and the
/// bounded remainder tail_subtracted(Lambda) goes through an ExpansionTable.
class SolutionExpansion {
 public:
  static SolutionExpansion build(const InitialProfile1D& profile, int n_max, SignMode mode = SignMode::Alternating,
                                 const TableOptions& opts = {});

  int growth_order() const { return p_; }
  const ExpansionTable& decaying() const { return table_; }
  /// sum_{m<=p} (2 sqrt t)^{p-m} [c+_m G_{p-m}(eta) + (-1)^{p-m} c-_m G_{p-m}(-eta)];
  /// for p = 0 this is the erfc block.
  double growing(double eta, double t) const;
  double evaluate_eta(double eta, double t, int n_max) const;
  double evaluate(double x, double t, int n_max) const;

 private:
  int p_ = 0;
  std::vector<double> plus_;
  std::vector<double> minus_;
  ExpansionTable table_;
};

/// eta -> (c+_n - c-_n)/(4 sqrt(pi)) h_n(eta) (literal log difference).
std::function<double(double)> h_n1_function(int n, const std::pair<AsymptoticTail, AsymptoticTail>& tails,
                                            SignMode mode = SignMode::Alternating);

/// eta -> H_{n,0}(eta) assembled from precomputed moments.
std::function<double(double)> assemble_h_n0(int n, const InitialProfile1D& profile, const TailMoments& plus,
                                            const TailMoments& minus, SignMode mode = SignMode::Alternating,
                                            const AssemblyConvention& convention = kCalibratedConvention);

/// Partial sum through order n_max for bounded data.
double eval_theorem1(const InitialProfile1D& profile, double x, double t, int n_max,
                     SignMode mode = SignMode::Alternating);

/// Partial sum for data of growth order p >= 1.
double eval_power_case(const InitialProfile1D& profile, double x, double t, int n_max,
                       SignMode mode = SignMode::Alternating);

/// Leading 2D term t^{-1/2} erfc_half(-eta1) exp(-eta2^2) (1/(2 sqrt pi)) int Lambda_0.
/// Only growth order 0 is implemented; p >= 1 throws ValidationError.
double eval_theorem2_leading(const InitialProfile2D& profile, double x1, double x2, double t, double tol);

// --- coefficient extraction ------------------------------------------------------

struct FitOrder {
  int n = 1;
  bool has_log = false;
  bool operator==(const FitOrder&) const = default;
};

struct ExtractionOptions {
  /// Orders 1..subtract_through of the assembled expansion are removed from the
  /// oracle data before fitting (the leading block is always removed).
  int subtract_through = 0;
  SignMode mode = SignMode::Alternating;
  double max_condition = 1e10;
};

struct ExtractionFit {
  double eta = 0.0;
  std::vector<FitOrder> orders;  // sorted: decay rate, then log column first
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  double condition_number = 0.0;
  std::vector<double> t_grid;

  /// Fitted coefficient for (n, has_log); throws std::out_of_range if absent.
  double coefficient(int n, bool has_log) const;
};

/// `count` points geometric on [t_min, t_max].
std::vector<double> geometric_grid(double t_min, double t_max, int count);

/// Default extraction / convergence grid: 12 points on [1e2, 1e6].
std::vector<double> default_t_grid();

/// Least-squares fit of oracle values u(2 eta sqrt t, t), minus known terms,
/// against {t^{-n/2}, t^{-n/2} ln t}. Rows are weighted by t^{n_min/2};
/// columns are unit-normalized before a column-pivoted QR solve. Throws
/// NumericalError when the normalized design has condition number above
/// opts.max_condition.
ExtractionFit extract_coefficients(const InitialProfile1D& profile, double eta, std::vector<FitOrder> orders,
                                   std::span<const double> t_grid, double tol, const ExtractionOptions& opts = {});

// --- calibration --------------------------------------------------------------

struct CalibrationScore {
  AssemblyConvention convention;
  double score = 0.0;
};

struct CalibrationReport {
  AssemblyConvention best;
  double best_score = 0.0;
  double runner_up_score = 0.0;
  std::vector<CalibrationScore> scores;
};

/// Scores every candidate convention by its worst disagreement, over the given
/// profiles, etas and orders n <= n_check, with unsubtracted extraction fits.
CalibrationReport calibrate_assembly(std::span<const InitialProfile1D> profiles, std::span<const double> etas,
                                     int n_check = 3, double oracle_tol = 1e-14);

}  // namespace heatasym
