#include "heatasym/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "heatasym/error.hpp"
#include "heatasym/oracle.hpp"
#include "heatasym/quadrature.hpp"
#include "parallel.hpp"

namespace heatasym {

namespace {

constexpr double kSqrtPi = 1.0 / std::numbers::inv_sqrtpi;

double sign_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

double minus_parity_factor(MinusParity parity, int n) {
  switch (parity) {
    case MinusParity::OddSign:
      return sign_power(n - 1);
    case MinusParity::Unit:
      return 1.0;
    case MinusParity::EvenSign:
      return sign_power(n);
  }
  return 1.0;
}

double log_multiplier(double plus, double minus, int n, LogDifference diff) {
  const double m = diff == LogDifference::Literal ? minus : sign_power(n) * minus;
  return (plus - m) / (4.0 * kSqrtPi);
}

void require_bounded(const InitialProfile1D& profile, const char* who) {
  if (profile.growth_order() != 0) {
    throw ValidationError(std::string(who) + ": profile '" + profile.name + "' has growth order " +
                          std::to_string(profile.growth_order()) + ", expected 0");
  }
}

void require_order_available(const InitialProfile1D& profile, int n_max, const char* who) {
  // Moments of order n need c_{n+1}, ... for the far tail.
  if (n_max >= profile.common_n_max()) {
    throw ValidationError(std::string(who) + ": order " + std::to_string(n_max) + " needs more than " +
                          std::to_string(profile.common_n_max()) + " tail coefficients");
  }
}

ExpansionOrder assemble_order(int n, const InitialProfile1D& profile, const TailMoments& plus,
                              const TailMoments& minus, const AssemblyConvention& conv) {
  ExpansionOrder order;
  order.n = n;
  const double cp = profile.tail_plus.coefficient(n);
  const double cm = profile.tail_minus.coefficient(n);
  const double scale = 1.0 / (kSqrtPi * std::ldexp(1.0, n));

  auto add_side = [&](double c, bool reflected) {
    if (c == 0.0) return;
    order.plain_terms.push_back({TermKind::JPlusK, n, reflected, c});
    if (!conv.finite_part_terms) return;
    for (int r = 0; r <= n - 2; ++r) {
      order.plain_terms.push_back({TermKind::Hermite, r + 1, reflected, c * std::ldexp(1.0, r) / (r - n + 1)});
    }
  };
  add_side(cp * scale, false);
  // Minus side: the mirrored profile has coefficients (-1)^n c-_n.
  add_side(sign_power(n) * cm * scale, true);

  double ip = plus.value(n);
  double im = minus.value(n);
  if (!conv.fold_ln2) {
    ip -= cp * std::numbers::ln2;
    im -= sign_power(n) * cm * std::numbers::ln2;
  }
  const double moment = ip + minus_parity_factor(conv.minus_parity, n) * im;
  if (moment != 0.0) order.plain_terms.push_back({TermKind::Hermite, n, false, moment / (2.0 * kSqrtPi)});

  order.log_multiplier = log_multiplier(cp, cm, n, conv.log_difference);
  return order;
}

}  // namespace

// --- convention -----------------------------------------------------------------

std::string describe(const AssemblyConvention& c) {
  std::string s = "minus_parity=";
  switch (c.minus_parity) {
    case MinusParity::OddSign:
      s += "(-1)^(n-1)";
      break;
    case MinusParity::Unit:
      s += "1";
      break;
    case MinusParity::EvenSign:
      s += "(-1)^n";
      break;
  }
  s += c.fold_ln2 ? " fold_ln2=yes" : " fold_ln2=no";
  s += c.finite_part_terms ? " finite_part=yes" : " finite_part=no";
  s += c.log_difference == LogDifference::Literal ? " log=literal" : " log=alternating";
  return s;
}

std::vector<AssemblyConvention> candidate_conventions() {
  std::vector<AssemblyConvention> out;
  for (auto parity : {MinusParity::OddSign, MinusParity::Unit, MinusParity::EvenSign}) {
    for (bool ln2 : {true, false}) {
      for (bool fp : {true, false}) {
        for (auto diff : {LogDifference::Literal, LogDifference::Alternating}) {
          out.push_back({parity, ln2, fp, diff});
        }
      }
    }
  }
  return out;
}

// --- ExpansionTable -------------------------------------------------------------

ExpansionTable ExpansionTable::build(const InitialProfile1D& profile, int n_max, SignMode mode,
                                     const TableOptions& opts, const AssemblyConvention& convention) {
  check_profile(profile);
  require_bounded(profile, "ExpansionTable");
  if (n_max < 0) throw std::invalid_argument("ExpansionTable: n_max must be >= 0");
  TailMoments plus{Side::Plus, {}, {}};
  TailMoments minus{Side::Minus, {}, {}};
  if (n_max > 0) {
    require_order_available(profile, n_max, "ExpansionTable");
    plus = regularized_moments(profile, Side::Plus, n_max, opts.moment_tol);
    minus = regularized_moments(profile, Side::Minus, n_max, opts.moment_tol);
  }
  return build(profile, plus, minus, n_max, mode, opts, convention);
}

ExpansionTable ExpansionTable::build(const InitialProfile1D& profile, const TailMoments& plus,
                                     const TailMoments& minus, int n_max, SignMode mode, const TableOptions& opts,
                                     const AssemblyConvention& convention) {
  require_bounded(profile, "ExpansionTable");
  if (n_max < 0) throw std::invalid_argument("ExpansionTable: n_max must be >= 0");
  if (n_max > plus.n_max() || n_max > minus.n_max()) {
    throw ValidationError("ExpansionTable: moments computed only through order " +
                          std::to_string(std::min(plus.n_max(), minus.n_max())));
  }
  ExpansionTable t;
  t.mode_ = mode;
  t.convention_ = convention;
  t.integral_tol_ = opts.integral_tol;
  t.plus_ = plus;
  t.minus_ = minus;
  const double c0p = profile.tail_plus.coefficient(0);
  const double c0m = profile.tail_minus.coefficient(0);
  if (c0p != 0.0) t.leading_.push_back({TermKind::ErfcHalf, 0, false, c0p});
  if (c0m != 0.0) t.leading_.push_back({TermKind::ErfcHalf, 0, true, c0m});
  for (int n = 1; n <= n_max; ++n) {
    ExpansionOrder order = assemble_order(n, profile, plus, minus, convention);
    for (const auto& term : order.plain_terms) {
      if (!std::isfinite(term.coefficient)) {
        throw NumericalError("ExpansionTable: non-finite coefficient at order " + std::to_string(n));
      }
    }
    t.orders_.push_back(std::move(order));
  }
  return t;
}

const ExpansionOrder& ExpansionTable::order(int n) const {
  if (n < 1 || n > n_max()) throw std::out_of_range("ExpansionTable: order " + std::to_string(n));
  return orders_[static_cast<std::size_t>(n - 1)];
}

double ExpansionTable::term_value(const BasisTerm& term, double eta) const {
  const double arg = term.reflected ? -eta : eta;
  switch (term.kind) {
    case TermKind::ErfcHalf:
      return term.coefficient * erfc_half(-arg);
    case TermKind::JPlusK:
      return term.coefficient *
             (j_integral(term.index, arg, integral_tol_) + k_integral(term.index, arg, integral_tol_));
    case TermKind::Hermite:
      return term.coefficient * hermite_sum(term.index, arg, mode_);
  }
  return 0.0;
}

double ExpansionTable::leading(double eta) const {
  double s = 0.0;
  for (const auto& term : leading_) s += term_value(term, eta);
  return s;
}

double ExpansionTable::h_n0(int n, double eta) const {
  double s = 0.0;
  for (const auto& term : order(n).plain_terms) s += term_value(term, eta);
  return s;
}

double ExpansionTable::h_n1(int n, double eta) const {
  const auto& o = order(n);
  return o.log_multiplier == 0.0 ? 0.0 : o.log_multiplier * hermite_sum(n, eta, mode_);
}

double ExpansionTable::evaluate_eta(double eta, double t, int n_max) const {
  if (!(t > 0.0)) throw std::invalid_argument("ExpansionTable: t must be positive");
  if (n_max > this->n_max()) throw std::out_of_range("ExpansionTable: n_max beyond table");
  const double log_t = std::log(t);
  double s = leading(eta);
  for (int n = 1; n <= n_max; ++n) {
    s += std::pow(t, -0.5 * n) * (h_n0(n, eta) + h_n1(n, eta) * log_t);
  }
  return s;
}

double ExpansionTable::evaluate(double x, double t, int n_max) const {
  const auto pt = SelfSimilarPoint::from_xt(x, t);
  return evaluate_eta(pt.eta(), t, n_max);
}

// --- SolutionExpansion ----------------------------------------------------------

SolutionExpansion SolutionExpansion::build(const InitialProfile1D& profile, int n_max, SignMode mode,
                                           const TableOptions& opts) {
  check_profile(profile);
  SolutionExpansion e;
  e.p_ = profile.growth_order();
  if (e.p_ < 0) throw ValidationError("SolutionExpansion: negative growth order");
  if (profile.common_n_max() < e.p_) {
    throw ValidationError("SolutionExpansion: fewer tail coefficients than the growth order");
  }
  for (int m = 0; m <= e.p_; ++m) {
    e.plus_.push_back(profile.tail_plus.coefficient(m));
    e.minus_.push_back(profile.tail_minus.coefficient(m));
  }
  e.table_ = ExpansionTable::build(e.p_ == 0 ? profile : tail_subtracted(profile), n_max, mode, opts);
  return e;
}

double SolutionExpansion::growing(double eta, double t) const {
  if (p_ == 0) return table_.leading(eta);
  const double scale = 2.0 * std::sqrt(t);
  double s = 0.0;
  for (int m = 0; m <= p_; ++m) {
    const int k = p_ - m;
    const double a = plus_[static_cast<std::size_t>(m)];
    const double b = minus_[static_cast<std::size_t>(m)];
    double term = 0.0;
    if (a != 0.0) term += a * gaussian_halfline_moment(k, eta);
    if (b != 0.0) term += sign_power(k) * b * gaussian_halfline_moment(k, -eta);
    s += std::pow(scale, k) * term;
  }
  return s;
}

double SolutionExpansion::evaluate_eta(double eta, double t, int n_max) const {
  if (!(t > 0.0)) throw std::invalid_argument("SolutionExpansion: t must be positive");
  if (n_max > table_.n_max()) throw std::out_of_range("SolutionExpansion: n_max beyond table");
  const double log_t = std::log(t);
  double s = growing(eta, t);
  for (int n = 1; n <= n_max; ++n) {
    s += std::pow(t, -0.5 * n) * (table_.h_n0(n, eta) + table_.h_n1(n, eta) * log_t);
  }
  return s;
}

double SolutionExpansion::evaluate(double x, double t, int n_max) const {
  const auto pt = SelfSimilarPoint::from_xt(x, t);
  return evaluate_eta(pt.eta(), t, n_max);
}

// --- free functions -----------------------------------------------------------------

std::function<double(double)> h_n1_function(int n, const std::pair<AsymptoticTail, AsymptoticTail>& tails,
                                            SignMode mode) {
  if (n < 1) throw std::out_of_range("h_n1_function: n must be >= 1");
  if (tails.first.growth_order != 0 || tails.second.growth_order != 0) {
    throw ValidationError("h_n1_function: tails must have growth order 0");
  }
  const double mult = log_multiplier(tails.first.coefficient(n), tails.second.coefficient(n), n,
                                     kCalibratedConvention.log_difference);
  return [n, mult, mode](double eta) { return mult == 0.0 ? 0.0 : mult * hermite_sum(n, eta, mode); };
}

std::function<double(double)> assemble_h_n0(int n, const InitialProfile1D& profile, const TailMoments& plus,
                                            const TailMoments& minus, SignMode mode,
                                            const AssemblyConvention& convention) {
  if (n < 1) throw std::out_of_range("assemble_h_n0: n must be >= 1");
  auto table = std::make_shared<ExpansionTable>(
      ExpansionTable::build(profile, plus, minus, n, mode, TableOptions{}, convention));
  return [table, n](double eta) { return table->h_n0(n, eta); };
}

double eval_theorem1(const InitialProfile1D& profile, double x, double t, int n_max, SignMode mode) {
  require_bounded(profile, "eval_theorem1");
  return ExpansionTable::build(profile, n_max, mode).evaluate(x, t, n_max);
}

double eval_power_case(const InitialProfile1D& profile, double x, double t, int n_max, SignMode mode) {
  if (profile.growth_order() < 1) {
    throw ValidationError("eval_power_case: profile '" + profile.name + "' is bounded; use eval_theorem1");
  }
  return SolutionExpansion::build(profile, n_max, mode).evaluate(x, t, n_max);
}

double eval_theorem2_leading(const InitialProfile2D& profile, double x1, double x2, double t, double tol) {
  if (profile.growth_order != 0) {
    throw ValidationError("eval_theorem2_leading: only growth order 0 is implemented");
  }
  if (profile.tail_functions.empty() || !profile.tail_functions.front().fn) {
    throw ValidationError("eval_theorem2_leading: profile has no Lambda_0");
  }
  if (!(t > 0.0)) throw std::invalid_argument("eval_theorem2_leading: t must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("eval_theorem2_leading: tol must be positive");

  const auto& lead = profile.tail_functions.front();
  const double r0 = lead.support_radius;
  const auto cuts = quad::make_partition(-r0, r0, profile.breakpoints_x2);
  quad::Options opts;
  opts.abs_tol = tol;
  const auto mass = quad::integrate(lead.fn, cuts, opts);
  if (!mass.converged) throw NumericalError("eval_theorem2_leading: transverse mass did not converge");

  const double scale = 2.0 * std::sqrt(t);
  const double eta1 = x1 / scale;
  const double eta2 = x2 / scale;
  return erfc_half(-eta1) * std::exp(-eta2 * eta2) * mass.value / (2.0 * kSqrtPi * std::sqrt(t));
}

// --- extraction -------------------------------------------------------------------

double ExtractionFit::coefficient(int n, bool has_log) const {
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i].n == n && orders[i].has_log == has_log) return coefficients[i];
  }
  throw std::out_of_range("ExtractionFit: no column (" + std::to_string(n) + (has_log ? ", log)" : ")"));
}

std::vector<double> geometric_grid(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
    throw std::invalid_argument("geometric_grid: need 0 < t_min < t_max and count >= 2");
  }
  std::vector<double> out;
  const double step = std::log(t_max / t_min) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(i + 1 == count ? t_max : t_min * std::exp(step * i));
  return out;
}

std::vector<double> default_t_grid() { return geometric_grid(1e2, 1e6, 12); }

ExtractionFit extract_coefficients(const InitialProfile1D& profile, double eta, std::vector<FitOrder> orders,
                                   std::span<const double> t_grid, double tol, const ExtractionOptions& opts) {
  if (orders.empty()) throw ValidationError("extract_coefficients: no orders requested");
  if (t_grid.size() < orders.size() + 2) {
    throw ValidationError("extract_coefficients: need at least |orders| + 2 grid points");
  }
  for (const auto& o : orders) {
    if (o.n < 1) throw ValidationError("extract_coefficients: orders must have n >= 1");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw ValidationError("extract_coefficients: t grid must be positive and increasing");
    }
  }
  if (t_grid.back() / t_grid.front() < 1e3 * (1.0 - 1e-9)) {
    throw ValidationError("extract_coefficients: t grid must span at least 3 decades");
  }

  std::sort(orders.begin(), orders.end(), [](const FitOrder& a, const FitOrder& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.has_log && !b.has_log;
  });
  if (std::adjacent_find(orders.begin(), orders.end()) != orders.end()) {
    throw ValidationError("extract_coefficients: duplicate order");
  }

  const auto known = SolutionExpansion::build(profile, std::max(opts.subtract_through, 0), opts.mode);

  // Oracle calls are independent; run them concurrently over the grid.
  std::vector<double> data(t_grid.size());
  detail::parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    data[i] = heat_oracle_1d(profile, 2.0 * eta * std::sqrt(t), t, tol).value;
  });

  const auto rows = static_cast<Eigen::Index>(t_grid.size());
  const auto cols = static_cast<Eigen::Index>(orders.size());
  const double lead_power = 0.5 * orders.front().n;
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double t = t_grid[static_cast<std::size_t>(i)];
    const double w = std::pow(t, lead_power);
    b(i) = w * (data[static_cast<std::size_t>(i)] - known.evaluate_eta(eta, t, opts.subtract_through));
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& o = orders[static_cast<std::size_t>(j)];
      a(i, j) = w * std::pow(t, -0.5 * o.n) * (o.has_log ? std::log(t) : 1.0);
    }
  }
  Eigen::VectorXd norms = a.colwise().norm().transpose();
  Eigen::MatrixXd scaled = a * norms.cwiseInverse().asDiagonal();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= opts.max_condition)) {
    throw NumericalError("extract_coefficients: design condition number " + std::to_string(cond) +
                         " exceeds " + std::to_string(opts.max_condition));
  }
  const Eigen::VectorXd y = scaled.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd c = y.cwiseQuotient(norms);

  ExtractionFit fit;
  fit.eta = eta;
  fit.orders = orders;
  fit.coefficients.assign(c.data(), c.data() + c.size());
  fit.residual_norm = (a * c - b).norm();
  fit.condition_number = cond;
  fit.t_grid.assign(t_grid.begin(), t_grid.end());
  return fit;
}

// --- calibration -------------------------------------------------------------------

CalibrationReport calibrate_assembly(std::span<const InitialProfile1D> profiles, std::span<const double> etas,
                                     int n_check, double oracle_tol) {
  if (profiles.empty() || etas.empty()) throw ValidationError("calibrate_assembly: nothing to calibrate on");
  if (n_check < 1) throw std::invalid_argument("calibrate_assembly: n_check must be >= 1");

  // One extra order absorbs the next term so that the checked ones are clean.
  std::vector<FitOrder> orders;
  for (int n = 1; n <= n_check + 1; ++n) {
    orders.push_back({n, true});
    orders.push_back({n, false});
  }
  const auto grid = default_t_grid();

  struct Target {
    std::size_t profile;
    ExtractionFit fit;
  };
  std::vector<Target> targets;
  std::vector<std::pair<TailMoments, TailMoments>> moments;
  const TableOptions topts{};
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& prof = profiles[i];
    require_bounded(prof, "calibrate_assembly");
    require_order_available(prof, n_check, "calibrate_assembly");
    moments.emplace_back(regularized_moments(prof, Side::Plus, n_check, topts.moment_tol),
                         regularized_moments(prof, Side::Minus, n_check, topts.moment_tol));
    for (double eta : etas) targets.push_back({i, extract_coefficients(prof, eta, orders, grid, oracle_tol)});
  }

  CalibrationReport report;
  for (const auto& conv : candidate_conventions()) {
    double worst = 0.0;
    std::vector<ExpansionTable> tables;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      tables.push_back(ExpansionTable::build(profiles[i], moments[i].first, moments[i].second, n_check,
                                             SignMode::Alternating, topts, conv));
    }
    for (const auto& target : targets) {
      const auto& table = tables[target.profile];
      for (int n = 1; n <= n_check; ++n) {
        const double d0 = std::abs(table.h_n0(n, target.fit.eta) - target.fit.coefficient(n, false));
        const double d1 = std::abs(table.h_n1(n, target.fit.eta) - target.fit.coefficient(n, true));
        worst = std::max(worst, d0 + d1);
      }
    }
    report.scores.push_back({conv, worst});
  }
  std::vector<CalibrationScore> sorted = report.scores;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CalibrationScore& a, const CalibrationScore& b) { return a.score < b.score; });
  report.best = sorted.front().convention;
  report.best_score = sorted.front().score;
  report.runner_up_score = sorted.size() > 1 ? sorted[1].score : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace heatasym
