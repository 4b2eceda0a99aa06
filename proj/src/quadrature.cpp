#include "qrd/quadrature.hpp"

#include <array>
#include <mutex>
#include <numbers>
#include <queue>
#include <vector>

namespace qrd::numerics {

namespace {

constexpr int kMaxLevel = 14;

struct StoredRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

StoredRule build_rule(int n) {
  StoredRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z_prev = z;
      z = z_prev - p1 / pp;
      if (std::abs(z - z_prev) <= 1e-15) break;
    }
    const auto lo = static_cast<std::size_t>(i - 1);
    const auto hi = static_cast<std::size_t>(n - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[hi] = rule.weights[lo];
  }
  return rule;
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

GaussLegendreRule gauss_legendre(int level) {
  if (level < 1 || level > kMaxLevel) throw std::out_of_range("gauss_legendre: level must be in [1, 14]");
  static std::array<StoredRule, kMaxLevel + 1> rules;
  static std::array<std::once_flag, kMaxLevel + 1> flags;
  const auto idx = static_cast<std::size_t>(level);
  std::call_once(flags[idx], [&] { rules[idx] = build_rule(1 << level); });
  return {rules[idx].nodes, rules[idx].weights};
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     const AdaptiveOptions& opts) {
  IntegrationResult result;
  std::priority_queue<Segment> heap;
  heap.push(kronrod15(f, a, b));
  result.evaluations = 15;
  double total = heap.top().value;
  double error = heap.top().error;
  while (static_cast<int>(heap.size()) < opts.max_intervals) {
    if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
      result.converged = true;
      break;
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.error = error;
  if (!result.converged) result.converged = error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  return result;
}

IntegrationResult integrate_half_line(const std::function<double(double)>& f, const AdaptiveOptions& opts) {
  const auto mapped = [&f](double t) {
    const double one_minus = 1.0 - t;
    const double z = t / one_minus;
    const double v = f(z);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  return integrate_adaptive(mapped, 0.0, 1.0, opts);
}

}  // namespace qrd::numerics
