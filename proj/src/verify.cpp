#include "heatasym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heatasym/error.hpp"
#include "heatasym/oracle.hpp"
#include "parallel.hpp"

namespace heatasym {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_geometric(std::span<const double> grid, std::size_t min_points) {
  if (grid.size() < min_points) {
    throw ValidationError("t grid needs at least " + std::to_string(min_points) + " points");
  }
  if (!(grid.front() > 0.0)) throw ValidationError("t grid must be positive");
  const double ratio = grid[1] / grid[0];
  if (!(ratio > 1.0)) throw ValidationError("t grid must be increasing");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] / grid[i - 1] / ratio - 1.0) > 1e-6) throw ValidationError("t grid must be geometric");
  }
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// Operator A(f, n) at eta from a five-point stencil.
double heat_operator(const std::function<double(double)>& f, int n, double eta, double h) {
  const double fm2 = f(eta - 2.0 * h);
  const double fm1 = f(eta - h);
  const double f0 = f(eta);
  const double fp1 = f(eta + h);
  const double fp2 = f(eta + 2.0 * h);
  const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  const double d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  return -0.25 * d2 - 0.5 * eta * d1 - 0.5 * n * f0;
}

}  // namespace

const char* to_string(CellStatus status) {
  switch (status) {
    case CellStatus::Pass:
      return "pass";
    case CellStatus::Fail:
      return "fail";
    case CellStatus::Inconclusive:
      return "inconclusive";
    case CellStatus::Exact:
      return "exact";
  }
  return "?";
}

double ConvergenceReport::residual(std::size_t i_eta, std::size_t i_n, std::size_t i_t) const {
  return residuals.at((i_eta * n_max_list.size() + i_n) * t_grid.size() + i_t);
}

const ConvergenceCell& ConvergenceReport::cell(std::size_t i_eta, std::size_t i_n) const {
  return cells.at(i_eta * n_max_list.size() + i_n);
}

bool ConvergenceReport::passed() const {
  return std::none_of(cells.begin(), cells.end(), [](const auto& c) { return c.status == CellStatus::Fail; });
}

ConvergenceReport convergence_report(const InitialProfile1D& profile, std::span<const double> eta_values,
                                     std::span<const double> t_grid, std::span<const int> n_max_list, double tol,
                                     const ConvergenceOptions& opts) {
  if (eta_values.empty() || n_max_list.empty()) throw ValidationError("convergence_report: empty eta or N list");
  if (!(tol > 0.0)) throw std::invalid_argument("convergence_report: tol must be positive");
  require_geometric(t_grid, 8);
  const int n_top = *std::max_element(n_max_list.begin(), n_max_list.end());
  if (*std::min_element(n_max_list.begin(), n_max_list.end()) < 0) {
    throw ValidationError("convergence_report: N must be >= 0");
  }

  const auto expansion = SolutionExpansion::build(profile, n_top, opts.mode);
  const std::size_t ne = eta_values.size();
  const std::size_t nt = t_grid.size();
  const std::size_t nn = n_max_list.size();

  ConvergenceReport rep;
  rep.profile = profile.name;
  rep.eta_values.assign(eta_values.begin(), eta_values.end());
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  rep.n_max_list.assign(n_max_list.begin(), n_max_list.end());

  std::vector<double> oracle(ne * nt);
  rep.oracle_errors.resize(ne * nt);
  detail::parallel_for(ne * nt, [&](std::size_t k) {
    const double eta = eta_values[k / nt];
    const double t = t_grid[k % nt];
    const auto r = heat_oracle_1d(profile, 2.0 * eta * std::sqrt(t), t, tol);
    oracle[k] = r.value;
    rep.oracle_errors[k] = r.error_estimate;
  });

  // The coefficients depend on eta only, so each costs one evaluation per eta.
  const auto& table = expansion.decaying();
  std::vector<double> h0(ne * static_cast<std::size_t>(n_top) + 1), h1(h0.size());
  detail::parallel_for(ne, [&](std::size_t ie) {
    for (int n = 1; n <= n_top; ++n) {
      const std::size_t k = ie * static_cast<std::size_t>(n_top) + static_cast<std::size_t>(n - 1);
      h0[k] = table.h_n0(n, eta_values[ie]);
      h1[k] = table.h_n1(n, eta_values[ie]);
    }
  });

  rep.residuals.resize(ne * nn * nt);
  for (std::size_t ie = 0; ie < ne; ++ie) {
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = t_grid[it];
      const double log_t = std::log(t);
      std::vector<double> partial(static_cast<std::size_t>(n_top) + 1);
      partial[0] = expansion.growing(eta_values[ie], t);
      for (int n = 1; n <= n_top; ++n) {
        const std::size_t k = ie * static_cast<std::size_t>(n_top) + static_cast<std::size_t>(n - 1);
        partial[static_cast<std::size_t>(n)] =
            partial[static_cast<std::size_t>(n - 1)] + std::pow(t, -0.5 * n) * (h0[k] + h1[k] * log_t);
      }
      for (std::size_t in = 0; in < nn; ++in) {
        const double approx = partial[static_cast<std::size_t>(n_max_list[in])];
        rep.residuals[(ie * nn + in) * nt + it] = std::abs(oracle[ie * nt + it] - approx);
      }
    }
  }

  for (std::size_t ie = 0; ie < ne; ++ie) {
    for (std::size_t in = 0; in < nn; ++in) {
      ConvergenceCell cell;
      cell.eta = eta_values[ie];
      cell.n_max = n_max_list[in];
      cell.slope = kNaN;
      std::vector<double> ts, rs;
      bool exact = true;
      for (std::size_t it = 0; it < nt; ++it) {
        const double r = rep.residual(ie, in, it);
        const double noise = std::max(tol, rep.oracle_errors[ie * nt + it]);
        if (r > noise) exact = false;
        if (r > opts.floor_factor * noise) {
          ts.push_back(t_grid[it]);
          rs.push_back(r);
        }
      }
      cell.points_used = static_cast<int>(ts.size());
      if (exact) {
        cell.status = CellStatus::Exact;
      } else if (ts.size() < 3) {
        cell.status = CellStatus::Inconclusive;
      } else {
        cell.slope = loglog_slope(ts, rs);
        if (!std::isfinite(cell.slope)) throw NumericalError("convergence_report: non-finite slope");
        const double bound = -0.5 * (cell.n_max + 1) + opts.slope_slack;
        cell.status = cell.slope <= bound ? CellStatus::Pass : CellStatus::Fail;
      }
      rep.cells.push_back(cell);
    }
  }
  return rep;
}

RecurrenceResidual recurrence_residual(const std::function<double(double)>& h_n0,
                                       const std::function<double(double)>& h_n1, int n,
                                       std::span<const double> eta_grid, double h_step) {
  if (n < 1) throw std::out_of_range("recurrence_residual: n must be >= 1");
  if (eta_grid.empty()) throw ValidationError("recurrence_residual: empty eta grid");
  if (!(h_step > 0.0) || h_step > 1e-3) throw std::invalid_argument("recurrence_residual: need 0 < h_step <= 1e-3");
  std::vector<RecurrenceResidual> per_point(eta_grid.size());
  detail::parallel_for(eta_grid.size(), [&](std::size_t i) {
    const double eta = eta_grid[i];
    const double a_log = heat_operator(h_n1, n, eta, h_step);
    const double a_plain = heat_operator(h_n0, n, eta, h_step) + h_n1(eta);
    if (!std::isfinite(a_log) || !std::isfinite(a_plain)) {
      throw NumericalError("recurrence_residual: non-finite derivative estimate");
    }
    per_point[i] = {std::abs(a_log), std::abs(a_plain)};
  });
  RecurrenceResidual out;
  for (const auto& r : per_point) {
    out.r_log = std::max(out.r_log, r.r_log);
    out.r_plain = std::max(out.r_plain, r.r_plain);
  }
  return out;
}

RecurrenceResidual recurrence_residual(const ExpansionTable& table, int n, std::span<const double> eta_grid,
                                       double h_step) {
  if (n < 1 || n > table.n_max()) throw std::out_of_range("recurrence_residual: order not in table");
  return recurrence_residual([&table, n](double eta) { return table.h_n0(n, eta); },
                             [&table, n](double eta) { return table.h_n1(n, eta); }, n, eta_grid, h_step);
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1 || !(hi >= lo)) throw std::invalid_argument("linear_grid: bad range");
  if (count == 1) return {lo};
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

EquivarianceReport equivariance_suite(const InitialProfile1D& profile, std::span<const EquivarianceSample> samples,
                                      double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("equivariance_suite: tol must be positive");
  const auto base = SolutionExpansion::build(profile, 0);
  EquivarianceReport rep;
  rep.checks.resize(samples.size());
  detail::parallel_for(samples.size(), [&](std::size_t i) {
    const auto& s = samples[i];
    const auto scaled = scaling_image(profile, s.lambda);
    EquivarianceCheck c;
    c.sample = s;
    const double a = heat_oracle_1d(scaled, s.x, s.t, tol).value;
    const double b = heat_oracle_1d(profile, s.lambda * s.x, s.lambda * s.lambda * s.t, tol).value;
    c.oracle_gap = std::abs(a - b);
    c.oracle_bound = 2.0 * tol;

    // The growing block of the scaled data at (x, t) against the original at
    // (lambda x, lambda^2 t): same eta, so only rounding may separate them.
    const auto scaled_exp = SolutionExpansion::build(scaled, 0);
    const auto p1 = SelfSimilarPoint::from_xt(s.x, s.t);
    const auto p2 = SelfSimilarPoint::from_xt(s.lambda * s.x, s.lambda * s.lambda * s.t);
    const double la = scaled_exp.growing(p1.eta(), p1.t());
    const double lb = base.growing(p2.eta(), p2.t());
    c.leading_gap = std::abs(la - lb);
    const double leading_bound = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lb));
    c.passed = c.oracle_gap <= c.oracle_bound && c.leading_gap <= leading_bound;
    rep.checks[i] = c;
  });
  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.passed; });
  return rep;
}

}  // namespace heatasym
