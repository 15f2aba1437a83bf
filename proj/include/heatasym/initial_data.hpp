#pragma once

// Initial data with power-law tails.
//
// A 1D profile carries the function itself and the two coefficient sequences
// of its expansions at +-infinity,
//
//     Lambda(x) ~ x^p * sum_n c^{+-}_n x^{-n},   x -> +-infinity,
//
// with the same growth order p on both sides. Everything downstream (oracle,
// expansion, verification) reads profiles through this header only.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace heatasym {

enum class Side { Plus, Minus };

const char* to_string(Side side);

struct AsymptoticTail {
  Side side = Side::Plus;
  int growth_order = 0;
  std::vector<double> coefficients;

  int n_max() const { return static_cast<int>(coefficients.size()) - 1; }
  /// Coefficient c_n; throws std::out_of_range beyond n_max.
  double coefficient(int n) const;
  /// x^p * sum_{m=0}^{m_last} c_m x^{-m}.
  double partial_sum(double x, int m_last) const;
};

struct InitialProfile1D {
  std::string name;
  std::function<double(double)> evaluate;
  AsymptoticTail tail_plus{Side::Plus, 0, {}};
  AsymptoticTail tail_minus{Side::Minus, 0, {}};
  /// Discontinuities and kinks; every quadrature is split at them.
  std::vector<double> breakpoints;
  /// (inf Lambda, sup Lambda) when the profile is bounded.
  std::optional<std::pair<double, double>> bound_hint;

  double operator()(double x) const { return evaluate(x); }
  int growth_order() const { return tail_plus.growth_order; }
  const AsymptoticTail& tail(Side side) const {
    return side == Side::Plus ? tail_plus : tail_minus;
  }
  /// Largest n available on both sides.
  int common_n_max() const;
};

/// Checks structural invariants (finite coefficients, equal growth orders,
/// sorted breakpoints). Throws ValidationError.
void check_profile(const InitialProfile1D& profile);

/// x -> Lambda(-x), with tails swapped and sign-adjusted so that the result
/// is again a well-formed profile.
InitialProfile1D mirrored(const InitialProfile1D& profile);

/// Lambda minus its growing tail monomials x^{p-m} (m <= p) on each half-line.
/// The result is bounded (growth order 0), has a breakpoint at 0 and tail
/// coefficients c_n^{rem} = c_{p+n} for n >= 1, c_0^{rem} = 0.
InitialProfile1D tail_subtracted(const InitialProfile1D& profile);

/// Phi_n(s) = s^{n-1} [Lambda(s) - s^p sum_{m=0}^{n+p} c_m s^{-m}] on the
/// chosen side (s >= 1 for Plus, s <= -1 for Minus). For valid profiles this
/// decays like s^{-2}.
double phi_remainder(const InitialProfile1D& profile, Side side, int n, double s);

struct TailViolation {
  int n = 0;
  double s = 0.0;
  double ratio = 0.0;
};

struct TailValidationReport {
  bool passed = true;
  double c_bound = 0.0;
  /// worst_ratio[n-1] = max over resolved grid points of |Phi_n(s)| s^2.
  std::vector<double> worst_ratio;
  std::vector<TailViolation> violations;
  /// Grid points where floating-point cancellation in Phi_n exceeds the bound
  /// being tested; these are skipped rather than judged.
  std::size_t unresolved = 0;
};

/// For every n in [1, n_max - p] and every s in the grid (used as +|s| and -|s|),
/// checks |Phi_n(s)| <= c_bound s^{-2}. Violations are reported, not thrown.
TailValidationReport validate_tails(const InitialProfile1D& profile, std::span<const double> s_grid,
                                    double c_bound);

/// Logarithmic grid with `per_decade` points per decade on [1, s_max].
std::vector<double> log_grid(double s_max, int per_decade = 4);

struct TailMoments {
  Side side = Side::Plus;
  /// values[n-1] = I_n for n = 1..n_max.
  std::vector<double> values;
  std::vector<double> error_estimates;

  int n_max() const { return static_cast<int>(values.size()); }
  double value(int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

/// Tail-regularized moments of a bounded profile (growth order 0):
///
///   I+_n = int_0^1 s^{n-1} Lambda ds + int_1^inf Phi+_n ds
///          - sum_{m=1}^{n} c+_{n-m}/m + c+_n ln 2.
///
/// The Minus side is defined as the Plus side of mirrored(profile). Throws
/// ValidationError for p != 0 or n_max >= available coefficients, and
/// NumericalError when an entry cannot be certified to `tol`.
TailMoments regularized_moments(const InitialProfile1D& profile, Side side, int n_max, double tol);

// --- builtin catalog --------------------------------------------------------

/// Number of exact tail coefficients attached to every builtin profile.
inline constexpr int kBuiltinTailOrder = 24;

InitialProfile1D make_const(double c);
InitialProfile1D make_heaviside();
InitialProfile1D make_linear();
InitialProfile1D make_quadratic();
InitialProfile1D make_lorentzian();
InitialProfile1D make_gated_lorentzian();
InitialProfile1D make_gated_inverse();
InitialProfile1D make_inverse();
InitialProfile1D make_halfline_power(int p);

struct BuiltinEntry {
  std::string name;
  std::string parameters;  // human-readable, e.g. "c" or "p"
};

/// Names accepted by make_builtin.
std::vector<BuiltinEntry> builtin_profiles();

/// Builds a catalog profile. `param` is c for "const" and p for
/// "halfline_power"; ignored otherwise. Throws ValidationError for unknown names.
InitialProfile1D make_builtin(const std::string& name, double param = 0.0);

// --- two-dimensional data ---------------------------------------------------

struct TransverseTail {
  std::function<double(double)> fn;
  double support_radius = 1.0;
};

/// Lambda(x1, x2) vanishing for x1 < 0, with
/// Lambda ~ x1^p sum_n Lambda_n(x2) x1^{-n} as x1 -> +inf and
/// supp Lambda inside |x2| < x1^nu.
struct InitialProfile2D {
  std::string name;
  std::function<double(double, double)> evaluate;
  int growth_order = 0;
  std::vector<TransverseTail> tail_functions;
  double support_exponent = 1.0;
  /// Kinks in x1 and in x2 used to split quadratures.
  std::vector<double> breakpoints_x1;
  std::vector<double> breakpoints_x2;
  /// When positive, the support is |x2| < max(x1^nu, transverse_bound); lets
  /// test fixtures that ignore the nu condition through the oracle.
  double transverse_bound = 0.0;

  double operator()(double x1, double x2) const { return evaluate(x1, x2); }
  double support_halfwidth(double x1) const;
};

/// g(x1) * chi_{[-1,1]}(x2) with g = tanh(x1 - 1) for x1 >= 1 and 0 otherwise;
/// p = 0, Lambda_0 = chi_{[-1,1]}, all other Lambda_n = 0, nu = 1.
InitialProfile2D make_gated_strip();

}  // namespace heatasym
