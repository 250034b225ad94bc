#pragma once

// Small one-dimensional quadrature toolkit shared by li(x) and the
// smooth-window transforms.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace ntlab::quad {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction; `eps` is the absolute
/// tolerance requested for the whole interval. The interval is first cut
/// into `initial_panels` pieces so oscillatory integrands are not
/// mistaken for flat ones by the first coarse estimate.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double eps,
                        int initial_panels = 16, int max_depth = 40) {
  if (a == b) return 0.0;
  double total = 0.0;
  const double h = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == initial_panels) ? b : lo + h;
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, eps / initial_panels,
                                  max_depth);
  }
  return total;
}

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(std::size_t n) : nodes(n), weights(n) {
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      // recompute derivative at the converged node
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

/// Composite Gauss-Legendre: `panels` equal panels, `rule` nodes each.
template <class F>
double composite_gauss(const F& f, double a, double b, std::size_t panels,
                       const GaussLegendre& rule) {
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double mid = a + (i + 0.5) * h;
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      s += rule.weights[j] * f(mid + 0.5 * h * rule.nodes[j]);
    total += 0.5 * h * s;
  }
  return total;
}

}  // namespace ntlab::quad
