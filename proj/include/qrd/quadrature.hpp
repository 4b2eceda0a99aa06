#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>

namespace qrd::numerics {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

/// Rule with 2^level points (level in [1, 14]). Rules are built once and cached.
GaussLegendreRule gauss_legendre(int level);

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod integration on [a, b].
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     const AdaptiveOptions& opts = {});

/// Integral over (0, inf) through the map z = t / (1 - t), t in (0, 1).
IntegrationResult integrate_half_line(const std::function<double(double)>& f, const AdaptiveOptions& opts = {});

/// Golden-section search for the maximiser of a unimodal function on [lo, hi].
/// Templated so callers can run the comparisons in extended precision.
template <typename Real, typename F>
Real golden_section_maximize(F&& f, Real lo, Real hi, Real x_tol, int max_iter = 500) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section_maximize: empty bracket");
  const Real inv_phi = (std::sqrt(Real(5)) - Real(1)) / Real(2);
  Real x1 = hi - inv_phi * (hi - lo);
  Real x2 = lo + inv_phi * (hi - lo);
  Real f1 = f(x1);
  Real f2 = f(x2);
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return (lo + hi) / Real(2);
}

template <typename Real, typename F>
Real golden_section_minimize(F&& f, Real lo, Real hi, Real x_tol, int max_iter = 500) {
  return golden_section_maximize<Real>([&](Real x) { return -f(x); }, lo, hi, x_tol, max_iter);
}

}  // namespace qrd::numerics
