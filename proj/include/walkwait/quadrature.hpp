#pragma once

// Adaptive Simpson quadrature with a global interval budget.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace walkwait {

struct QuadratureOptions {
  double abs_tol = 1e-9;
  std::size_t max_intervals = std::size_t{1} << 20;
  int min_depth = 3;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
  bool converged = true;
};

namespace detail {

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
  double tol;
  int depth;
};

}  // namespace detail

/// Integrates f over [a, b]. Panels are refined depth-first until the
/// Richardson error estimate |S2 - S1| / 15 is below the panel's share of
/// the tolerance. When the interval budget runs out the remaining panels
/// are accepted as they are and `converged` is cleared.
template <typename F>
QuadratureResult adaptive_simpson(F&& f, double a, double b,
                                  const QuadratureOptions& opts = {}) {
  QuadratureResult out;
  if (!(b > a)) return out;

  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  std::vector<detail::SimpsonPanel> stack;
  stack.push_back({a, m, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb),
                   opts.abs_tol, 0});
  std::size_t live = 1;

  while (!stack.empty()) {
    const detail::SimpsonPanel p = stack.back();
    stack.pop_back();

    const double lm = 0.5 * (p.a + p.m), rm = 0.5 * (p.m + p.b);
    const double flm = f(lm), frm = f(rm);
    const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;

    const bool budget_left = live + 1 <= opts.max_intervals;
    if (p.depth >= opts.min_depth && std::abs(delta) <= 15.0 * p.tol) {
      out.value += left + right + delta / 15.0;
      out.error_estimate += std::abs(delta) / 15.0;
      continue;
    }
    if (!budget_left) {
      out.value += left + right + delta / 15.0;
      out.error_estimate += std::abs(delta) / 15.0;
      out.converged = false;
      continue;
    }
    ++live;
    stack.push_back({p.m, rm, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol,
                     p.depth + 1});
    stack.push_back({p.a, lm, p.m, p.fa, flm, p.fm, left, 0.5 * p.tol,
                     p.depth + 1});
  }
  out.intervals = live;
  return out;
}

/// Integrates f over [a, b] one smooth piece at a time. `cuts` must be
/// ascending; only those strictly inside (a, b) split the range. The
/// tolerance is shared evenly between pieces. Panel ends that fall on a cut
/// are evaluated one ulp inside the piece, so a right-continuous jump never
/// leaks into the neighbouring piece.
template <typename F>
QuadratureResult integrate_piecewise(F&& f, std::span<const double> cuts,
                                     double a, double b,
                                     const QuadratureOptions& opts = {}) {
  QuadratureResult total;
  if (!(b > a)) return total;

  std::vector<double> edges{a};
  for (double c : cuts)
    if (c > a && c < b) edges.push_back(c);
  edges.push_back(b);

  QuadratureOptions piece = opts;
  const auto n = edges.size() - 1;
  piece.abs_tol = opts.abs_tol / static_cast<double>(n);
  piece.max_intervals = std::max<std::size_t>(1, opts.max_intervals / n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const double lo_in = std::nextafter(lo, hi), hi_in = std::nextafter(hi, lo);
    auto inside = [&](double x) {
      return f(x <= lo ? lo_in : (x >= hi ? hi_in : x));
    };
    const auto r = adaptive_simpson(inside, lo, hi, piece);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.intervals += r.intervals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

}  // namespace walkwait
