#pragma once

// Special functions behind every term of the long-time expansion.
//
// Normalization: erfc_half(x) = (1/sqrt(pi)) * int_x^inf exp(-s^2) ds, which is
// half of the textbook complementary error function. The textbook function is
// deliberately not exported from this library.

#include <cstddef>

namespace heatasym {

/// Sign convention for the Hermite-type sums h_n.
///
/// Alternating carries (-1)^k on the k-th term and is what the heat operator
/// requires. PaperLiteral drops that sign; it is kept for reproducing the
/// published H_{n,1} display verbatim and for documenting that it fails the
/// heat-operator recurrence from n = 3 on.
enum class SignMode { PaperLiteral, Alternating };

const char* to_string(SignMode mode);

/// A point of the (x, t) half-plane in self-similar form, eta = x / (2 sqrt(t)).
class SelfSimilarPoint {
 public:
  static SelfSimilarPoint from_xt(double x, double t);
  static SelfSimilarPoint from_eta(double eta, double t);

  double eta() const { return eta_; }
  double t() const { return t_; }
  double x() const { return x_; }

 private:
  SelfSimilarPoint(double eta, double t, double x) : eta_(eta), t_(t), x_(x) {}
  double eta_;
  double t_;
  double x_;
};

/// (1/sqrt(pi)) * int_x^inf exp(-s^2) ds; decreasing from 1 to 0.
double erfc_half(double x);

/// G_p(eta) = (1/sqrt(pi)) * int_0^inf v^p exp(-(v - eta)^2) dv.
///
/// Upward recurrence G_p = eta G_{p-1} + (p-1)/2 G_{p-2} from
/// G_0 = erfc_half(-eta), G_1 = eta G_0 + exp(-eta^2)/(2 sqrt(pi)). The
/// recurrence cancels for strongly negative eta; there the scaled integral is
/// evaluated directly.
double gaussian_halfline_moment(int p, double eta);

/// h_n(eta) = sum_{k=0}^{floor((n-1)/2)} s_k eta^{n-2k-1} exp(-eta^2) / (4^k k! (n-2k-1)!),
/// with s_k = (-1)^k (Alternating) or 1 (PaperLiteral). Throws for n < 1.
double hermite_sum(int n, double eta, SignMode mode = SignMode::Alternating);

/// Taylor coefficient a_k(eta) of exp(2 z eta - z^2) in z, i.e. H_k(eta)/k!.
double taylor_coefficient(int k, double eta);

/// Psi_n(z, eta) = z^{-n} [exp(-(z-eta)^2) - exp(-eta^2) T_{n-1}(z; eta)] where
/// T_{n-1} is the degree n-1 Taylor polynomial of exp(2 z eta - z^2). The
/// removable singularity at z = 0 is handled by summing the Taylor tail
/// directly whenever that is the better-conditioned route.
double psi_n(int n, double z, double eta);

/// Default evaluation budget for the incomplete integrals below.
inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// J_n(eta) = int_1^inf z^{-n} exp(-(z-eta)^2) dz to absolute error tol.
double j_integral(int n, double eta, double tol, std::size_t max_evals = kDefaultNodeBudget);

/// K_n(eta) = int_0^1 Psi_n(z, eta) dz to absolute error tol.
double k_integral(int n, double eta, double tol, std::size_t max_evals = kDefaultNodeBudget);

}  // namespace heatasym
