#include "qrd/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qrd/quadrature.hpp"
#include "qrd/random.hpp"
#include "qrd/specfun.hpp"

namespace qrd::validation {

namespace {

// High-precision reference values (40-digit evaluations, rounded).
struct Reference {
  const char* name;
  double observed;
  double expected;
  double tol;
};

double raw_moment(const channel::GammaGammaParams& p, int k) {
  const double e = p.epsilon();
  const double z = p.zeta();
  return std::exp(specfun::ln_gamma(e + k) + specfun::ln_gamma(z + k) - specfun::ln_gamma(e) - specfun::ln_gamma(z) -
                  k * std::log(e * z));
}

CheckResult relative(std::string name, double observed, double expected, double tol) {
  const bool ok = std::isfinite(observed) && std::abs(observed - expected) <= tol * std::abs(expected);
  return {std::move(name), observed, expected, tol, CheckResult::Kind::relative, ok};
}

CheckResult absolute(std::string name, double observed, double expected, double tol) {
  const bool ok = std::isfinite(observed) && std::abs(observed - expected) <= tol;
  return {std::move(name), observed, expected, tol, CheckResult::Kind::absolute, ok};
}

CheckResult minimum(std::string name, double observed, double floor) {
  return {std::move(name), observed, floor, 0.0, CheckResult::Kind::minimum, observed >= floor};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double laplace_by_quadrature(const channel::GammaGammaParams& ch, double s) {
  numerics::AdaptiveOptions opts;
  opts.rel_tol = 1e-11;
  const auto r = numerics::integrate_half_line([&](double w) { return channel::pdf(ch, w / s) * std::exp(-w); }, opts);
  return r.value / s;
}

}  // namespace

TabulatedCdf::TabulatedCdf(const channel::GammaGammaParams& params, double z_min, double z_max, std::size_t nodes)
    : g_(params.g()) {
  if (!(z_min > 0.0 && z_max > z_min && nodes >= 2)) throw std::invalid_argument("TabulatedCdf: bad grid");
  z_.resize(nodes);
  f_.resize(nodes);
  pdf_.resize(nodes);
  const double step = std::log(z_max / z_min) / static_cast<double>(nodes - 1);
  for (std::size_t k = 0; k < nodes; ++k) {
    z_[k] = z_min * std::exp(step * static_cast<double>(k));
    pdf_[k] = channel::pdf(params, z_[k]);
  }
  numerics::AdaptiveOptions opts;
  opts.rel_tol = 1e-12;
  auto density = [&](double z) { return channel::pdf(params, z); };
  f_[0] = numerics::integrate_adaptive(density, 0.0, z_[0], opts).value;
  for (std::size_t k = 1; k < nodes; ++k) {
    f_[k] = f_[k - 1] + numerics::integrate_adaptive(density, z_[k - 1], z_[k], opts).value;
  }
}

double TabulatedCdf::operator()(double z) const {
  if (!(z > 0.0)) return 0.0;
  if (z < z_.front()) return f_.front() * std::pow(z / z_.front(), g_);
  if (z >= z_.back()) return std::min(1.0, f_.back());
  const auto k = static_cast<std::size_t>(std::upper_bound(z_.begin(), z_.end(), z) - z_.begin()) - 1;
  const double h = z_[k + 1] - z_[k];
  const double t = (z - z_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f_[k] + (t3 - 2 * t2 + t) * h * pdf_[k] + (-2 * t3 + 3 * t2) * f_[k + 1] +
         (t3 - t2) * h * pdf_[k + 1];
}

double ks_p_value(double statistic, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw std::invalid_argument("ks_test: no samples");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, sorted.size())};
}

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  using specfun::bessel_k;
  using specfun::tricomi_u;

  const Reference refs[] = {
      {"ln_gamma(7.3)", specfun::ln_gamma(7.3), 7.1478925230222486921, 1e-13},
      {"beta(2.5, 2.5)", specfun::beta(2.5, 2.5), 0.073631077818510779026, 1e-13},
      {"bessel_k(0.7, 2)", bessel_k(0.7, 2.0), 0.12601327130661063698, 1e-11},
      {"bessel_k(0.5, 1)", bessel_k(0.5, 1.0), 0.46106850444789455844, 1e-11},
      {"bessel_k(2.3, 0.01)", bessel_k(2.3, 0.01), 114365.29966112098177, 1e-11},
      {"bessel_k(4.6, 37)", bessel_k(4.6, 37.0), 2.3228529138258198025e-17, 1e-11},
      {"bessel_k(0, 1e-6)", bessel_k(0.0, 1e-6), 13.931442073626419413, 1e-11},
      {"tricomi_u(0.5, 0.3, 1.2)", tricomi_u(0.5, 0.3, 1.2), 0.68569339711503297478, 1e-9},
      {"tricomi_u(2.1, -1.4, 9.45)", tricomi_u(2.1, -1.4, 9.45), 0.0042242113084837391245, 1e-9},
      {"tricomi_u(4, 3.1, 0.076)", tricomi_u(4.0, 3.1, 0.076), 34.943538582593357236, 1e-9},
      {"tricomi_u(0.5, 0.3, 30)", tricomi_u(0.5, 0.3, 30.0), 0.17910758081496383643, 1e-9},
      {"tricomi_u(0.5, 0.3, 0.006)", tricomi_u(0.5, 0.3, 0.006), 1.3605128616162480478, 1e-9},
      {"tricomi_u(4, 3.1, 760)", tricomi_u(4.0, 3.1, 760.0), 2.9677153750305718569e-12, 1e-9},
      {"tricomi_u(2.1, -1.4, 5)", tricomi_u(2.1, -1.4, 5.0), 0.010229636347325239969, 1e-9},
      {"q_function(1)", specfun::q_function(1.0), 0.15865525393145705141, 1e-13},
  };
  for (const auto& r : refs) out.push_back(relative(r.name, r.observed, r.expected, r.tol));

  // Identities.
  for (auto [a, b, x] : {std::array{0.5, 0.3, 1.2}, std::array{2.1, -1.4, 9.45}, std::array{4.0, 3.1, 0.076}}) {
    std::ostringstream name;
    name << "kummer transform U(" << a << ", " << b << ", " << x << ")";
    out.push_back(relative(name.str(), tricomi_u(a, b, x), std::pow(x, 1.0 - b) * tricomi_u(1.0 + a - b, 2.0 - b, x),
                           1e-9));
  }
  for (auto [nu, x] : {std::array{0.7, 2.0}, std::array{1.3, 0.4}, std::array{2.6, 11.0}}) {
    std::ostringstream name;
    name << "bessel_k recurrence nu=" << nu << " x=" << x;
    out.push_back(relative(name.str(), bessel_k(nu + 1.0, x), bessel_k(nu - 1.0, x) + 2.0 * nu / x * bessel_k(nu, x),
                           1e-12));
  }

  // Channel density and Laplace transform.
  const channel::GammaGammaParams strong(0.5, 1.2);
  out.push_back(relative("pdf(0.5, 1.2; 0.8)", channel::pdf(strong, 0.8), 0.23441376516866011301, 1e-12));
  {
    numerics::AdaptiveOptions q;
    q.rel_tol = 1e-11;
    const double mass = numerics::integrate_half_line([&](double z) { return channel::pdf(strong, z); }, q).value;
    const double mean = numerics::integrate_half_line([&](double z) { return z * channel::pdf(strong, z); }, q).value;
    out.push_back(relative("pdf normalisation", mass, 1.0, 1e-8));
    out.push_back(relative("pdf mean", mean, 1.0, 1e-8));
  }
  out.push_back(relative("laplace_exact(0.5, 1.2; s=10)", channel::laplace_exact(strong, 10.0), 0.29615719416305204252,
                         1e-10));
  for (auto [e, z] : {std::array{0.5, 1.2}, std::array{2.1, 4.5}, std::array{4.0, 1.9}}) {
    const channel::GammaGammaParams ch(e, z);
    for (double s : {1e-2, 1.0, 1e2, 1e4}) {
      std::ostringstream name;
      name << "laplace vs quadrature (" << e << ", " << z << ") s=" << s;
      out.push_back(relative(name.str(), channel::laplace_exact(ch, s), laplace_by_quadrature(ch, s), 1e-6));
    }
  }

  const double lambda = channel::lambda_constant(strong) * (1.0 + opts.lambda_perturbation);
  out.push_back(relative("lambda(0.5, 1.2)", lambda, 1.095081209726233159, 1e-10));
  {
    const double s = 1e10;
    out.push_back(relative("laplace asymptote s=1e10", lambda * std::pow(s, -strong.g()),
                           channel::laplace_exact(strong, s), 1e-3));
  }
  out.push_back(relative("second moment formula", channel::second_moment(strong), raw_moment(strong, 2), 1e-12));

  // Sampler.
  RandomStream stream(opts.seed, 0, stream_domain::validation);
  auto samples = channel::sample(strong, stream, opts.samples);
  const double n = static_cast<double>(samples.size());
  double m1 = 0.0;
  double m2 = 0.0;
  for (double v : samples) {
    m1 += v;
    m2 += v * v;
  }
  m1 /= n;
  m2 /= n;
  const double e2 = raw_moment(strong, 2);
  const double e4 = raw_moment(strong, 4);
  out.push_back(absolute("sampler mean (3 SE)", m1, 1.0, 3.0 * std::sqrt((e2 - 1.0) / n)));
  out.push_back(absolute("sampler second moment (3 SE)", m2, e2, 3.0 * std::sqrt((e4 - e2 * e2) / n)));
  std::sort(samples.begin(), samples.end());
  const TabulatedCdf cdf(strong);
  const auto ks = ks_test(samples, [&](double z) { return cdf(z); });
  out.push_back(minimum("sampler KS p-value", ks.p_value, 0.01));
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  std::size_t width = 5;
  for (const auto& r : results) width = std::max(width, r.name.size());
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-6s  %-18s  %-18s  %s\n", static_cast<int>(width), "check", "status",
                "observed", "expected", "tolerance");
  os << line;
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::string tol;
    switch (r.kind) {
      case CheckResult::Kind::relative: tol = "rel " + fmt(r.tolerance); break;
      case CheckResult::Kind::absolute: tol = "abs " + fmt(r.tolerance); break;
      case CheckResult::Kind::minimum: tol = ">= expected"; break;
    }
    std::snprintf(line, sizeof line, "%-*s  %-6s  %-18s  %-18s  %s\n", static_cast<int>(width), r.name.c_str(),
                  r.passed ? "ok" : "FAIL", fmt(r.observed).c_str(), fmt(r.expected).c_str(), tol.c_str());
    os << line;
    if (!r.passed) ++failed;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed\n";
  return os.str();
}

}  // namespace qrd::validation
