#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qrd/channel.hpp"
#include "qrd/link.hpp"

// Union-bound and asymptotic error-rate analysis of the rotated scheme and
// the single-slot baseline, plus the design optimiser.

namespace qrd::analysis {

/// Raised when the Craig integral does not settle; carries the last estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

struct CraigOptions {
  /// Stop once two successive Gauss-Legendre rules (n and 2n nodes) agree to this.
  double rel_tol = 1e-8;
  int min_level = 4;
  int max_level = 14;
};

struct PepPair {
  double pep1;  // pairs differing in one position
  double pep2;  // pairs differing in both positions
};

enum class Scheme { qrd, baseline };
enum class Squeezing { on, off };

/// Q(sqrt(eta e^{2r} (I1 u1^2 + I2 u2^2) / 2)).
double pep_conditional(const link::SlotPair& u, const channel::IrradiancePair& fading, double eta, double r);

/// (1/pi) int_0^{pi/2} L(eta e^{2r} u1^2 / (4 sin^2 t)) L(eta e^{2r} u2^2 / (4 sin^2 t)) dt,
/// with L(0) = 1. u = 0 returns 1/2.
double pep_average(const link::SlotPair& u, double eta, double r, const channel::GammaGammaParams& channel,
                   const CraigOptions& opts = {});

PepPair pep_pair(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                 const CraigOptions& opts = {});

/// Average PEP for every ordered codeword pair (i, j), i != j; the diagonal is 0.
using PairwiseTable = std::array<std::array<double, link::Codebook::kSize>, link::Codebook::kSize>;
PairwiseTable enumerate_pairwise_peps(const link::ModulationDesign& design, double eta,
                                      const channel::GammaGammaParams& channel, const CraigOptions& opts = {});

/// 2 PEP1 + PEP2.
double ser_union_qrd(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                     const CraigOptions& opts = {});
double ser_union_qrd(const link::LinkConfig& cfg, const CraigOptions& opts = {});

/// (1/pi) int_0^{pi/2} L(eta e^{2r} alpha^2 / sin^2 t) dt.
double ser_baseline(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                    const CraigOptions& opts = {});
double ser_baseline(const link::LinkConfig& cfg, const CraigOptions& opts = {});

/// 3 2^{6g-1} (eta sin 2theta*)^{-2g} Lambda^2 B(2g + 1/2, 2g + 1/2) / pi.
double c1_constant(double eta, const channel::GammaGammaParams& channel);

/// 2^{8g-1} Lambda^2 (u1'^2 u2'^2)^{-g} eta^{-2g} B(2g + 1/2, 2g + 1/2) / pi, the
/// high-SNR PEP constant for amplitude-normalised differences u' = u / alpha.
/// The default product is the one-position pair at theta*, 4 sin^2(2 theta*).
double c0_pair_constant(double eta, const channel::GammaGammaParams& channel, double normalized_product = 3.2);

/// 2^{2g-1} eta^{-g} Lambda B(g + 1/2, g + 1/2) / pi.
double cb(double eta, const channel::GammaGammaParams& channel);

/// Leading high-SNR term of ser_union_qrd, 2 C0(one) + C0(two) times
/// (e^{2r} alpha^2)^{-2g}; equals C1 (e^{2r} alpha^2)^{-2g} at theta*.
/// theta must avoid 0, pi/4 and pi/2, where a class loses its full diversity.
double asymptotic_ser_qrd(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel);

/// cb (e^{2r} alpha^2)^{-g}.
double asymptotic_ser_baseline(const link::ModulationDesign& design, double eta,
                               const channel::GammaGammaParams& channel);

/// False when laplace_asymptotic is more than `tolerance` away from
/// laplace_exact at the smallest Laplace argument the design produces.
bool asymptotic_reliable(const link::ModulationDesign& design, double eta, const channel::GammaGammaParams& channel,
                         Scheme scheme, double tolerance = 0.05);

struct AsymptoticGains {
  double d;       // diversity order
  double c1;      // C1 for the rotated scheme, cb for the baseline
  double gc_max;  // c1^{-1/d}
};

AsymptoticGains asymptotic_gains(const channel::GammaGammaParams& channel, double eta, Scheme scheme,
                                 Squeezing squeezing);

struct DesignPoint {
  double theta;
  double beta;
  double r;
  double alpha;
};

enum class DesignMode { closed_form, numeric };

/// What the numeric search minimises: the union bound itself, or the larger
/// of the two class PEPs.
enum class DesignObjective { union_bound, worst_pair };

struct DesignReport {
  DesignPoint point;
  double ser;  // ser_union_qrd at point
  bool converged;
  int evaluations;
  std::string diagnostic;
};

/// theta = atan(2) / 2, beta = N / (2N + 1), r = ln(2N + 1) / 2, alpha = sqrt((1 - beta) N).
DesignPoint closed_form_design(double n_total);

/// Closed form, or a 91 x 101 grid over [0, pi/4] x [0, 1] followed by
/// golden-section coordinate descent. Failure to settle is reported through
/// `converged` and `diagnostic` together with the best point found.
DesignReport optimal_design(double n_total, const channel::GammaGammaParams& channel, double eta, DesignMode mode,
                            DesignObjective objective = DesignObjective::union_bound);

/// (sqrt(beta N) + sqrt(beta N + 1))^2 (1 - beta); maximised at N / (2N + 1).
template <typename Real>
Real split_objective(Real beta, Real n_total) {
  using std::sqrt;
  const Real s = sqrt(beta * n_total) + sqrt(beta * n_total + Real(1));
  return s * s * (Real(1) - beta);
}

inline double appendix_b_split_objective(double beta, double n_total) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("split objective: beta must lie in [0, 1]");
  return split_objective(beta, n_total);
}

inline double beta_star(double n_total) { return n_total / (2.0 * n_total + 1.0); }

}  // namespace qrd::analysis
