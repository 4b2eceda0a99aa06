#include "qrd/analysis.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "qrd/quadrature.hpp"
#include "qrd/specfun.hpp"

namespace qrd::analysis {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double laplace_or_one(const channel::GammaGammaParams& channel, double s) {
  return s == 0.0 ? 1.0 : channel::laplace_exact(channel, s);
}

// (1/pi) int_0^{pi/2} f(t) dt by Gauss-Legendre rules of doubling size.
template <typename F>
double craig_integral(F&& integrand, const CraigOptions& opts) {
  if (opts.min_level < 1 || opts.max_level > 14 || opts.min_level > opts.max_level || !(opts.rel_tol > 0.0)) {
    throw std::invalid_argument("CraigOptions: levels must satisfy 1 <= min_level <= max_level <= 14, rel_tol > 0");
  }
  auto rule_sum = [&](int level) {
    const auto rule = numerics::gauss_legendre(level);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = 0.5 * kHalfPi * (rule.nodes[i] + 1.0);
      sum += rule.weights[i] * integrand(t);
    }
    return 0.5 * kHalfPi * sum / std::numbers::pi;
  };
  double previous = rule_sum(opts.min_level);
  for (int level = opts.min_level + 1; level <= opts.max_level; ++level) {
    const double current = rule_sum(level);
    if (std::abs(current - previous) <= opts.rel_tol * std::abs(current)) return current;
    previous = current;
  }
  std::ostringstream os;
  os << "Craig integral did not reach relative tolerance " << opts.rel_tol << " with 2^" << opts.max_level
     << " nodes (last estimate " << previous << ")";
  throw QuadratureError(os.str(), previous);
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("analysis: eta must lie in [0, 1]");
}

// Lambda^2 2^{4g-1} B(2g + 1/2, 2g + 1/2) / pi: the factor shared by every
// two-slot high-SNR PEP once the slot arguments are pulled out.
double two_slot_prefactor(const channel::GammaGammaParams& channel) {
  const double g = channel.g();
  const double lambda = channel::lambda_constant(channel);
  return lambda * lambda * std::exp2(4.0 * g - 1.0) * specfun::beta(2.0 * g + 0.5, 2.0 * g + 0.5) /
         std::numbers::pi;
}

double objective_at(double n_total, double theta, double beta, const channel::GammaGammaParams& channel, double eta,
                    DesignObjective objective) {
  const auto design = link::design_from_split(n_total, beta, theta);
  if (objective == DesignObjective::union_bound) return ser_union_qrd(design, eta, channel);
  const PepPair p = pep_pair(design, eta, channel);
  return std::max(p.pep1, p.pep2);
}

}  // namespace

double pep_conditional(const link::SlotPair& u, const channel::IrradiancePair& fading, double eta, double r) {
  check_eta(eta);
  const double energy = fading.i1 * u[0] * u[0] + fading.i2 * u[1] * u[1];
  return specfun::q_function(std::sqrt(eta * std::exp(2.0 * r) * energy / 2.0));
}

double pep_average(const link::SlotPair& u, double eta, double r, const channel::GammaGammaParams& channel,
                   const CraigOptions& opts) {
  check_eta(eta);
  if (u[0] == 0.0 && u[1] == 0.0) return 0.5;
  const double scale = eta * std::exp(2.0 * r) / 4.0;
  const double a1 = scale * u[0] * u[0];
  const double a2 = scale * u[1] * u[1];
  return craig_integral(
      [&](double t) {
        const double s2 = std::sin(t) * std::sin(t);
        return laplace_or_one(channel, a1 / s2) * laplace_or_one(channel, a2 / s2);
      },
      opts);
}

PepPair pep_pair(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                 const CraigOptions& opts) {
  return {pep_average(link::difference_vector(design, link::PairClass::one_position), eta, design.r(), channel, opts),
          pep_average(link::difference_vector(design, link::PairClass::two_positions), eta, design.r(), channel,
                      opts)};
}

PairwiseTable enumerate_pairwise_peps(const link::ModulationDesign& design, double eta,
                                      const channel::GammaGammaParams& channel, const CraigOptions& opts) {
  const link::Codebook book(design);
  PairwiseTable table{};
  for (std::size_t i = 0; i < link::Codebook::kSize; ++i) {
    for (std::size_t j = 0; j < link::Codebook::kSize; ++j) {
      if (i == j) continue;
      const auto& a = book.codeword(i);
      const auto& b = book.codeword(j);
      table[i][j] = pep_average({a[0] - b[0], a[1] - b[1]}, eta, design.r(), channel, opts);
    }
  }
  return table;
}

double ser_union_qrd(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                     const CraigOptions& opts) {
  const PepPair p = pep_pair(design, eta, channel, opts);
  return 2.0 * p.pep1 + p.pep2;
}

double ser_union_qrd(const link::LinkConfig& cfg, const CraigOptions& opts) {
  return ser_union_qrd(cfg.design, cfg.eta, cfg.channel, opts);
}

double ser_baseline(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                    const CraigOptions& opts) {
  check_eta(eta);
  const double a = eta * std::exp(2.0 * design.r()) * design.alpha() * design.alpha();
  if (a == 0.0) return 0.5;
  return craig_integral(
      [&](double t) {
        const double s = std::sin(t);
        return laplace_or_one(channel, a / (s * s));
      },
      opts);
}

double ser_baseline(const link::LinkConfig& cfg, const CraigOptions& opts) {
  return ser_baseline(cfg.design, cfg.eta, cfg.channel, opts);
}

double c1_constant(double eta, const channel::GammaGammaParams& channel) {
  check_eta(eta);
  const double g = channel.g();
  const double lambda = channel::lambda_constant(channel);
  const double sin2 = std::sin(2.0 * link::theta_star());
  return 3.0 * std::exp2(6.0 * g - 1.0) * std::pow(eta * sin2, -2.0 * g) / std::numbers::pi * lambda * lambda *
         specfun::beta(2.0 * g + 0.5, 2.0 * g + 0.5);
}

double c0_pair_constant(double eta, const channel::GammaGammaParams& channel, double normalized_product) {
  check_eta(eta);
  if (!(normalized_product > 0.0)) throw std::domain_error("c0_pair_constant: normalized product must be positive");
  const double g = channel.g();
  const double lambda = channel::lambda_constant(channel);
  return std::exp2(8.0 * g - 1.0) * lambda * lambda * std::pow(normalized_product, -g) * std::pow(eta, -2.0 * g) *
         specfun::beta(2.0 * g + 0.5, 2.0 * g + 0.5) / std::numbers::pi;
}

double cb(double eta, const channel::GammaGammaParams& channel) {
  check_eta(eta);
  const double g = channel.g();
  return std::exp2(2.0 * g - 1.0) * std::pow(eta, -g) / std::numbers::pi * channel::lambda_constant(channel) *
         specfun::beta(g + 0.5, g + 0.5);
}

double asymptotic_ser_qrd(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel) {
  check_eta(eta);
  const double two_theta = 2.0 * design.theta();
  const double one = std::sin(two_theta) * std::sin(two_theta) / 4.0;  // (u1 u2 / 4 alpha^2)^2, one position
  const double two = std::cos(two_theta) * std::cos(two_theta);        // same, two positions
  // Rounding leaves cos^2 near 1e-33 at a double-valued pi/4, so compare
  // against a threshold well above that.
  if (!(one > 1e-20 && two > 1e-20)) {
    throw std::domain_error("asymptotic_ser_qrd: theta must avoid 0, pi/4 and pi/2");
  }
  const double g = channel.g();
  const double snr = eta * link::effective_snr_proxy(design);
  return two_slot_prefactor(channel) * std::pow(snr, -2.0 * g) * (2.0 * std::pow(one, -g) + std::pow(two, -g));
}

double asymptotic_ser_baseline(const link::ModulationDesign& design, double eta,
                               const channel::GammaGammaParams& channel) {
  return cb(eta, channel) * std::pow(link::effective_snr_proxy(design), -channel.g());
}

bool asymptotic_reliable(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                         Scheme scheme, double tolerance) {
  check_eta(eta);
  double s = 0.0;
  if (scheme == Scheme::baseline) {
    s = eta * link::effective_snr_proxy(design);
  } else {
    s = std::numeric_limits<double>::infinity();
    const double scale = eta * std::exp(2.0 * design.r()) / 4.0;
    for (auto pc : {link::PairClass::one_position, link::PairClass::two_positions}) {
      for (double ui : link::difference_vector(design, pc)) {
        const double a = scale * ui * ui;
        if (a > 0.0) s = std::min(s, a);
      }
    }
  }
  if (!(s > 0.0 && std::isfinite(s))) return false;
  const double ratio = channel::laplace_asymptotic(channel, s) / channel::laplace_exact(channel, s);
  return std::abs(ratio - 1.0) <= tolerance;
}

AsymptoticGains asymptotic_gains(const channel::GammaGammaParams& channel, double eta, Scheme scheme,
                                 Squeezing squeezing) {
  const double g = channel.g();
  const bool squeezed = squeezing == Squeezing::on;
  AsymptoticGains out{};
  if (scheme == Scheme::qrd) {
    out.d = squeezed ? 4.0 * g : 2.0 * g;
    out.c1 = c1_constant(eta, channel);
  } else {
    out.d = squeezed ? 2.0 * g : g;
    out.c1 = cb(eta, channel);
  }
  out.gc_max = std::pow(out.c1, -1.0 / out.d);
  return out;
}

DesignPoint closed_form_design(double n_total) {
  if (!(std::isfinite(n_total) && n_total > 0.0)) throw std::domain_error("closed_form_design: N must be positive");
  const double beta = beta_star(n_total);
  return {link::theta_star(), beta, 0.5 * std::log(2.0 * n_total + 1.0), std::sqrt((1.0 - beta) * n_total)};
}

DesignReport optimal_design(double n_total, const channel::GammaGammaParams& channel, double eta, DesignMode mode,
                            DesignObjective objective) {
  if (mode == DesignMode::closed_form) {
    const DesignPoint p = closed_form_design(n_total);
    const auto design = link::design_from_split(n_total, p.beta, p.theta);
    return {p, ser_union_qrd(design, eta, channel), true, 1, ""};
  }
  if (!(std::isfinite(n_total) && n_total > 0.0)) throw std::domain_error("optimal_design: N must be positive");

  constexpr int kThetaPoints = 91;
  constexpr int kBetaPoints = 101;
  const double theta_step = (std::numbers::pi / 4) / (kThetaPoints - 1);
  const double beta_step = 1.0 / (kBetaPoints - 1);

  int evaluations = 0;
  int failures = 0;
  std::string first_failure;
  auto f = [&](double theta, double beta) {
    ++evaluations;
    try {
      return objective_at(n_total, theta, beta, channel, eta, objective);
    } catch (const QuadratureError& e) {
      if (failures++ == 0) first_failure = e.what();
      return std::numeric_limits<double>::infinity();
    }
  };

  double best_theta = 0.0;
  double best_beta = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kThetaPoints; ++i) {
    for (int j = 0; j < kBetaPoints; ++j) {
      const double theta = i * theta_step;
      const double beta = j * beta_step;
      const double v = f(theta, beta);
      if (v < best) {
        best = v;
        best_theta = theta;
        best_beta = beta;
      }
    }
  }

  constexpr int kMaxSweeps = 40;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    const double theta_before = best_theta;
    const double beta_before = best_beta;

    const double t = numerics::golden_section_minimize<double>(
        [&](double x) { return f(x, best_beta); }, std::max(0.0, best_theta - theta_step),
        std::min(std::numbers::pi / 4, best_theta + theta_step), 1e-9);
    if (const double v = f(t, best_beta); v < best) {
      best = v;
      best_theta = t;
    }
    const double b = numerics::golden_section_minimize<double>(
        [&](double x) { return f(best_theta, x); }, std::max(0.0, best_beta - beta_step),
        std::min(1.0, best_beta + beta_step), 1e-9);
    if (const double v = f(best_theta, b); v < best) {
      best = v;
      best_beta = b;
    }
    converged = std::abs(best_theta - theta_before) < 1e-8 && std::abs(best_beta - beta_before) < 1e-8;
  }

  const auto design = link::design_from_split(n_total, best_beta, best_theta);
  DesignReport report{{best_theta, best_beta, design.r(), design.alpha()},
                      ser_union_qrd(design, eta, channel),
                      converged && std::isfinite(best),
                      evaluations,
                      ""};
  std::ostringstream diag;
  if (!converged) diag << "coordinate descent did not settle within " << kMaxSweeps << " sweeps; ";
  if (failures > 0) diag << failures << " objective evaluations failed (first: " << first_failure << ")";
  report.diagnostic = diag.str();
  return report;
}

}  // namespace qrd::analysis
