// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qrd/analysis.hpp"
#include "qrd/channel.hpp"
#include "qrd/detector.hpp"
#include "qrd/link.hpp"
#include "qrd/validation.hpp"

#ifndef QRD_SIM_PATH
#error "QRD_SIM_PATH must point at the qrd_sim executable"
#endif

using namespace qrd;

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

const channel::GammaGammaParams kStrong(0.5, 1.2);
constexpr double kEta = 0.8;

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return out;
}

// Density in its Bessel-K form, evaluated with Boost.
double boost_pdf(double e, double k, double z) {
  const double h = 0.5 * (e + k);
  return 2.0 * std::pow(e * k, h) / (boost::math::tgamma(e) * boost::math::tgamma(k)) * std::pow(z, h - 1.0) *
         boost::math::cyl_bessel_k(e - k, 2.0 * std::sqrt(e * k * z));
}

Verdict laplace_identity() {
  const double shapes[][2] = {{0.5, 1.2}, {2.1, 4.5}, {4.0, 1.9}};
  boost::math::quadrature::exp_sinh<double> integrator;
  double worst = 0.0;
  for (const auto& s : shapes) {
    const channel::GammaGammaParams p(s[0], s[1]);
    for (double sv : logspace(1e-2, 1e5, 30)) {
      auto f = [&](double w) { return w <= 0.0 ? 0.0 : boost_pdf(s[0], s[1], w / sv) * std::exp(-w); };
      const double quad = integrator.integrate(f, 1e-13) / sv;
      const double exact = channel::laplace_exact(p, sv);
      worst = std::max(worst, std::abs(exact - quad) / exact);
    }
  }
  return {worst <= 1e-6, fmt("max relative gap %.3g over 90 points (tol 1e-6)", worst)};
}

Verdict sampler_fidelity() {
  const std::size_t n = 1'000'000;
  RandomStream rs(2024, 0, stream_domain::channel_samples);
  auto x = channel::sample(kStrong, rs, n);
  double m1 = 0, m2 = 0, m4 = 0;
  for (double v : x) {
    m1 += v;
    m2 += v * v;
    m4 += v * v * v * v;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  const double target2 = (1.0 + 1.0 / 0.5) * (1.0 + 1.0 / 1.2);
  // Standard errors from the exact moments: E[I^4] = prod_k (k)_4 / k^4.
  const double e4 = (0.5 * 1.5 * 2.5 * 3.5 / std::pow(0.5, 4)) * (1.2 * 2.2 * 3.2 * 4.2 / std::pow(1.2, 4));
  const double se1 = std::sqrt((target2 - 1.0) / n);
  const double se2 = std::sqrt((e4 - target2 * target2) / n);
  std::sort(x.begin(), x.end());
  const validation::TabulatedCdf cdf(kStrong);
  const auto ks = validation::ks_test(x, [&](double z) { return cdf(z); });
  const bool ok = std::abs(m1 - 1.0) <= 3.0 * se1 && std::abs(m2 - target2) <= 3.0 * se2 && ks.p_value > 0.01;
  return {ok, fmt("mean %.5f (1 +/- %.4f), E[I^2] %.4f (%.4f +/- %.4f), KS D=%.5f p=%.3f (need > 0.01); sample m4 %.1f",
                  m1, 3 * se1, m2, target2, 3 * se2, ks.statistic, ks.p_value, m4)};
}

Verdict pep_oracle() {
  const double n = 40.0;
  const link::LinkConfig cfg(kEta, kStrong, link::optimal_split_design(n), 40);
  const auto p = analysis::pep_pair(cfg.design, kEta, kStrong);
  detector::MonteCarloOptions mc;
  mc.threads = worker_threads();
  mc.target_errors = 0;
  const std::uint64_t trials = 10'000'000;
  bool ok = true;
  std::string detail;
  for (auto pc : {link::PairClass::one_position, link::PairClass::two_positions}) {
    const double expected = pc == link::PairClass::one_position ? p.pep1 : p.pep2;
    const auto est = detector::run_pairwise_monte_carlo(cfg, pc, trials, mc);
    const double ci = std::sqrt(expected * (1.0 - expected) / static_cast<double>(trials));
    const double z = (est.frequency - expected) / ci;
    ok = ok && std::abs(z) <= 3.0;
    detail += fmt("%s: MC %.5e vs %.5e (z=%+.2f); ", pc == link::PairClass::one_position ? "PEP1" : "PEP2",
                  est.frequency, expected, z);
  }
  return {ok, detail + "tol |z| <= 3"};
}

Verdict balance() {
  bool ok = true;
  std::string detail;
  for (double n : {80.0, 2000.0}) {
    const auto p = analysis::pep_pair(link::optimal_split_design(n), kEta, kStrong);
    const double u = analysis::ser_union_qrd(link::optimal_split_design(n), kEta, kStrong);
    const double gap = rel_err(p.pep2, p.pep1);
    const double gap3 = rel_err(u, 3.0 * p.pep1);
    ok = ok && gap <= 1e-6 && gap3 <= 1e-6;
    detail += fmt("N=%g: PEP1 %.6e PEP2 %.6e rel gap %.2e, Ps vs 3 PEP1 rel gap %.2e; ", n, p.pep1, p.pep2, gap, gap3);
  }
  return {ok, detail + "tol 1e-6 (the classes share u1^2 u2^2 but not u1^2 + u2^2, so they only meet as N grows)"};
}

Verdict design_agreement() {
  const double n = 80.0;
  const auto r = analysis::optimal_design(n, kStrong, kEta, analysis::DesignMode::numeric);
  const double theta_deg = r.point.theta * 180.0 / std::numbers::pi;
  const double target_deg = link::theta_star() * 180.0 / std::numbers::pi;
  const bool ok = r.converged && std::abs(theta_deg - target_deg) <= 0.2 && std::abs(r.point.beta - n / 161.0) <= 0.01;
  const double closed = analysis::ser_union_qrd(link::optimal_split_design(n), kEta, kStrong);
  return {ok, fmt("numeric theta %.3f deg (target %.3f +/- 0.2), beta %.4f (target %.4f +/- 0.01), SER %.6e vs "
                  "closed form %.6e",
                  theta_deg, target_deg, r.point.beta, n / 161.0, r.ser, closed)};
}

Verdict diversity_slope() {
  const auto grid = logspace(200.0, 2000.0, 10);
  auto slope_of = [&](const std::function<double(double)>& f) {
    std::vector<double> y;
    for (double n : grid) y.push_back(f(n));
    return loglog_slope(grid, y);
  };
  const double t = link::theta_star();
  const double q_half = slope_of([&](double n) { return analysis::ser_union_qrd(link::design_from_split(n, 0.5, t), kEta, kStrong); });
  const double q_zero = slope_of([&](double n) { return analysis::ser_union_qrd(link::design_from_split(n, 0.0, t), kEta, kStrong); });
  const double b_half = slope_of([&](double n) { return analysis::ser_baseline(link::design_from_split(n, 0.5, 0.0), kEta, kStrong); });
  const double b_zero = slope_of([&](double n) { return analysis::ser_baseline(link::design_from_split(n, 0.0, 0.0), kEta, kStrong); });
  bool ok = std::abs(q_half + 2.0) <= 0.2 && std::abs(q_zero + 1.0) <= 0.1 && std::abs(b_half + 1.0) <= 0.1 &&
            std::abs(b_zero + 0.5) <= 0.05;

  // Monte Carlo confirmation: codeword error rate at three grid points, its
  // log-log slope against the analytic one at the same points.
  const std::vector<double> pts{200.0, 400.0, 800.0};
  std::vector<double> mc_rate, mc_var_log, bound;
  detector::MonteCarloOptions mc;
  mc.threads = worker_threads();
  mc.block_size = 1u << 16;
  mc.target_errors = 800;  // symbol errors; about 500 codeword errors
  bool bound_ok = true;
  std::string points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const link::LinkConfig cfg(kEta, kStrong, link::design_from_split(pts[i], 0.5, t), 600 + i);
    const auto e = detector::run_monte_carlo(cfg, 400'000'000, mc);
    const double rate = e.codeword_error_rate();
    const double ci = 1.96 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(e.codeword_trials));
    const double u = analysis::ser_union_qrd(cfg.design, kEta, kStrong);
    bound_ok = bound_ok && rate - 3.0 / 1.96 * ci <= u;
    mc_rate.push_back(rate);
    mc_var_log.push_back(1.0 / static_cast<double>(e.codeword_errors));
    bound.push_back(u);
    if (!points.empty()) points += "; ";
    points += fmt("N=%g MC %.3e +/- %.1e (%lu errors) bound %.3e", pts[i], rate, ci,
                  static_cast<unsigned long>(e.codeword_errors), u);
  }
  const double mc_slope = loglog_slope(pts, mc_rate);
  const double an_slope = loglog_slope(pts, bound);
  // Delta method: Var(ln rate) ~ 1 / errors; slope weights are (ln x - mean) / Sxx.
  double mx = 0;
  for (double n : pts) mx += std::log(n) / pts.size();
  double sxx = 0, var = 0;
  for (double n : pts) sxx += (std::log(n) - mx) * (std::log(n) - mx);
  for (std::size_t i = 0; i < pts.size(); ++i) var += std::pow((std::log(pts[i]) - mx) / sxx, 2) * mc_var_log[i];
  const double se = std::sqrt(var);
  const bool mc_ok = std::abs(mc_slope - an_slope) <= 3.0 * se && bound_ok;
  return {ok && mc_ok,
          fmt("slopes: QRD beta=1/2 %.3f (-2 +/- 0.2), QRD beta=0 %.3f (-1 +/- 0.1), baseline squeezed %.3f "
              "(-1 +/- 0.1), baseline plain %.3f (-0.5 +/- 0.05); MC slope %.3f vs bound %.3f (3 SE = %.3f); ",
              q_half, q_zero, b_half, b_zero, mc_slope, an_slope, 3 * se) +
              points};
}

Verdict constant_consistency() {
  double worst = 0.0;
  for (double eta : {0.3, 0.8, 1.0}) {
    for (const auto& ch : {kStrong, channel::GammaGammaParams(2.1, 4.5), channel::GammaGammaParams(4.0, 1.9)}) {
      worst = std::max(worst, rel_err(analysis::c1_constant(eta, ch), 3.0 * analysis::c0_pair_constant(eta, ch)));
    }
  }
  const double n = 2000.0;
  const auto d = link::optimal_split_design(n);
  const double ratio = analysis::asymptotic_ser_qrd(d, kEta, kStrong) / analysis::ser_union_qrd(d, kEta, kStrong);
  const bool ok = worst <= 1e-10 && ratio >= 0.9 && ratio <= 1.1;
  return {ok, fmt("C1 vs 3 C0 max rel gap %.2e (tol 1e-10); asymptote / exact at N=%g: %.5f (need [0.9, 1.1])", worst, n,
                  ratio)};
}

Verdict split_maximiser() {
  double worst = 0.0;
  for (long double n : {1.0L, 10.0L, 80.0L, 1000.0L}) {
    long double lo = 0.0L, hi = 1.0L;
    const long double phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    long double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    long double fa = analysis::split_objective(a, n), fb = analysis::split_objective(b, n);
    while (hi - lo > 1e-13L) {
      if (fa < fb) {
        lo = a;
        a = b;
        fa = fb;
        b = lo + phi * (hi - lo);
        fb = analysis::split_objective(b, n);
      } else {
        hi = b;
        b = a;
        fb = fa;
        a = hi - phi * (hi - lo);
        fa = analysis::split_objective(a, n);
      }
    }
    const double found = static_cast<double>(0.5L * (lo + hi));
    worst = std::max(worst, std::abs(found - analysis::beta_star(static_cast<double>(n))));
  }
  bool monotone = true;
  double previous = 0.0;
  const auto grid = logspace(1e-3, 1e6, 40);
  for (double n : grid) {
    const double b = analysis::beta_star(n);
    monotone = monotone && b > previous && b < 0.5;
    previous = b;
  }
  const bool ok = worst <= 1e-8 && monotone && 0.5 - previous < 1e-6;
  return {ok, fmt("max |golden - N/(2N+1)| %.2e (tol 1e-8); beta* increasing on 40-point grid: %s, 1/2 - beta*(1e6) = %.2e",
                  worst, monotone ? "yes" : "no", 0.5 - previous)};
}

Verdict reductions() {
  const link::Codebook book(link::design_from_split(10.0, 0.4, 0.0));
  RandomStream rs(909, 0);
  int mismatches = 0;
  const int n = 100'000;
  for (int k = 0; k < n; ++k) {
    const channel::IrradiancePair f(channel::draw(kStrong, rs), channel::draw(kStrong, rs));
    const link::SlotPair y{5.0 * rs.normal(), 5.0 * rs.normal()};
    if (detector::ml_detect(y, f, kEta, book).index != detector::detect_symbol_by_symbol(y, book).index) ++mismatches;
  }
  bool sigma_ok = true;
  for (double n_total : {0.01, 1.0, 80.0, 2000.0}) {
    sigma_ok = sigma_ok && link::design_from_split(n_total, 0.0, link::theta_star()).sigma_q_sq() == 0.5;
  }
  return {mismatches == 0 && sigma_ok,
          fmt("theta=0 ML vs per-slot: %d mismatches in %d; r=0 noise variance exactly 1/2: %s", mismatches, n,
              sigma_ok ? "yes" : "no")};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict reproducibility() {
  const std::string dir = "acceptance_repro";
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir + "/sweep.toml");
    cfg << "n_grid = [5, 20, 80, 320]\ntrials = 400000\nseed = 31337\nblock_size = 8192\ntarget_errors = 300\n";
  }
  auto run = [&](int threads) {
    const std::string out = dir + "/sweep_t" + std::to_string(threads) + ".csv";
    const std::string cmd = std::string(QRD_SIM_PATH) + " ser-sweep --config " + dir + "/sweep.toml --threads " +
                            std::to_string(threads) + " --out " + out;
    const int rc = std::system(cmd.c_str());
    return std::pair{rc, slurp(out)};
  };
  const auto [rc1, a] = run(1);
  const auto [rc8, b] = run(8);
  const auto [rc1b, c] = run(1);
  const bool ok = rc1 == 0 && rc8 == 0 && rc1b == 0 && !a.empty() && a == b && a == c;
  return {ok, fmt("1-thread vs 8-thread sweep CSV (%zu bytes): %s; rerun: %s", a.size(), a == b ? "identical" : "DIFFERENT",
                  a == c ? "identical" : "DIFFERENT")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Verdict (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion all[] = {
      {1, "Laplace-transform identity", 10, laplace_identity},
      {2, "sampler fidelity", 30, sampler_fidelity},
      {3, "PEP oracle equivalence", 120, pep_oracle},
      {4, "balance of the two PEP classes at the closed-form optimum", 1, balance},
      {5, "numeric optimum vs closed-form design at N=80", 60, design_agreement},
      {6, "diversity-order slopes", 660, diversity_slope},
      {7, "asymptotic constant consistency", 10, constant_consistency},
      {8, "power-split maximiser", 1, split_maximiser},
      {9, "reduction checks", 10, reductions},
      {10, "thread-count reproducibility", 60, reproducibility},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = v.passed && in_time;
    failures += !pass;
    std::printf("[%s] criterion %d: %s: %s; %.2f s (budget %g s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs, c.budget_s, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
