#include "heatasym/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace heatasym::quad {

namespace {

// Kronrod 21-point abscissae on [0, 1]; odd indices are the Gauss 10-point nodes.
constexpr std::array<double, 11> kXgk = {
    0.00000000000000000e+00, 1.48874338981631211e-01, 2.94392862701460198e-01,
    4.33395394129247191e-01, 5.62757134668604683e-01, 6.79409568299024406e-01,
    7.80817726586416897e-01, 8.65063366688984511e-01, 9.30157491355708226e-01,
    9.73906528517171720e-01, 9.95657163025808081e-01,
};

constexpr std::array<double, 11> kWgk = {
    1.49445554002916906e-01, 1.47739104901338491e-01, 1.42775938577060081e-01,
    1.34709217311473326e-01, 1.23491976262065851e-01, 1.09387158802297642e-01,
    9.31254545836976055e-02, 7.50396748109199528e-02, 5.47558965743519960e-02,
    3.25581623079647275e-02, 1.16946388673718743e-02,
};

// Gauss 10-point weights for kXgk[1], kXgk[3], ..., kXgk[9].
constexpr std::array<double, 5> kWg = {
    2.95524224714752870e-01, 2.69266719309996355e-01, 2.19086362515982044e-01,
    1.49451349150580593e-01, 6.66713443086881376e-02,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool at_floor = false;
};

Segment gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 21> fv{};
  fv[0] = f(center);
  for (std::size_t j = 1; j < 11; ++j) {
    const double dx = half * kXgk[j];
    fv[2 * j - 1] = f(center - dx);
    fv[2 * j] = f(center + dx);
  }

  double kronrod = kWgk[0] * fv[0];
  double gauss = 0.0;
  double resabs = kWgk[0] * std::abs(fv[0]);
  for (std::size_t j = 1; j < 11; ++j) {
    const double pair = fv[2 * j - 1] + fv[2 * j];
    kronrod += kWgk[j] * pair;
    resabs += kWgk[j] * (std::abs(fv[2 * j - 1]) + std::abs(fv[2 * j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double resasc = kWgk[0] * std::abs(fv[0] - mean);
  for (std::size_t j = 1; j < 11; ++j) {
    resasc += kWgk[j] * (std::abs(fv[2 * j - 1] - mean) + std::abs(fv[2 * j] - mean));
  }

  const double width = std::abs(half);
  kronrod *= half;
  resabs *= width;
  resasc *= width;

  // QUADPACK qk21 error heuristic.
  double err = std::abs((kronrod - gauss * half));
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double floor = 50.0 * kEps * resabs;
  Segment s{a, b, kronrod, err, false};
  if (floor > err) {
    s.error = floor;
    s.at_floor = true;
  }
  if (!std::isfinite(kronrod)) {
    s.error = std::numeric_limits<double>::infinity();
    s.at_floor = false;
  }
  return s;
}

bool worse(const Segment& l, const Segment& r) { return l.error < r.error; }

}  // namespace

std::vector<double> make_partition(double a, double b, std::span<const double> extra) {
  std::vector<double> pts{a, b};
  for (double p : extra) {
    if (p > a && p < b) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

Result integrate(const std::function<double(double)>& f, std::span<const double> cuts,
                 const Options& opts) {
  Result res;
  if (cuts.size() < 2) return res;

  std::vector<Segment> heap;
  std::vector<Segment> done;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    Segment s = gauss_kronrod21(f, cuts[i], cuts[i + 1]);
    res.evals += 21;
    (s.at_floor ? done : heap).push_back(s);
  }
  std::make_heap(heap.begin(), heap.end(), worse);

  auto totals = [&](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    for (const auto& s : heap) {
      value += s.value;
      error += s.error;
    }
    for (const auto& s : done) {
      value += s.value;
      error += s.error;
    }
  };

  double value = 0.0;
  double error = 0.0;
  totals(value, error);
  // Rounding error already locked into finished segments; once the reducible
  // part drops below it, more splitting cannot improve the total.
  double floor_error = 0.0;
  for (const auto& s : done) floor_error += s.error;
  auto reached = [&] {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    return error <= target || error - floor_error <= std::max(target, floor_error);
  };
  while (!heap.empty()) {
    if (reached()) break;
    if (res.evals + 42 > opts.max_evals) break;

    std::pop_heap(heap.begin(), heap.end(), worse);
    const Segment worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Segment cannot be split further in floating point.
      done.push_back(worst);
      continue;
    }
    const Segment left = gauss_kronrod21(f, worst.a, mid);
    const Segment right = gauss_kronrod21(f, mid, worst.b);
    res.evals += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    for (const Segment& s : {left, right}) {
      if (s.at_floor) {
        floor_error += s.error;
        done.push_back(s);
      } else {
        heap.push_back(s);
        std::push_heap(heap.begin(), heap.end(), worse);
      }
    }
  }

  totals(value, error);
  const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  res.converged = std::isfinite(value) && (reached() || heap.empty());
  // Segments that refused to split without reaching their floor break convergence.
  for (const auto& s : done) {
    if (!s.at_floor && error > target) res.converged = false;
  }

  if (opts.refine_final) {
    double refined = 0.0;
    double refined_err = 0.0;
    auto refine = [&](const Segment& s) {
      const double mid = 0.5 * (s.a + s.b);
      const Segment l = gauss_kronrod21(f, s.a, mid);
      const Segment r = gauss_kronrod21(f, mid, s.b);
      res.evals += 42;
      refined += l.value + r.value;
      refined_err += l.error + r.error;
    };
    for (const auto& s : heap) refine(s);
    for (const auto& s : done) refine(s);
    value = refined;
    error = refined_err;
  }

  res.value = value;
  res.error = error;
  return res;
}

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opts) {
  const std::array<double, 2> cuts{a, b};
  return integrate(f, cuts, opts);
}

}  // namespace heatasym::quad
