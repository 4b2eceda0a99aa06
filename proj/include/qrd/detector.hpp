#pragma once

#include <cstddef>
#include <cstdint>

#include "qrd/channel.hpp"
#include "qrd/link.hpp"

// Joint ML detection over the two slots and the Monte Carlo error-rate engine.

namespace qrd::detector {

struct Decision {
  std::size_t index;
  link::SlotPair symbols;
};

/// argmin over the four hypotheses of ||y - sqrt(eta) diag(sqrt(I)) R(theta) x||^2.
/// Ties go to the lowest hypothesis index. Receiver knows (I1, I2) exactly.
Decision ml_detect(const link::SlotPair& observation, const channel::IrradiancePair& fading,
                   const link::LinkConfig& cfg);
Decision ml_detect(const link::SlotPair& observation, const channel::IrradiancePair& fading, double eta,
                   const link::Codebook& codebook);

/// Independent per-slot sign decisions; y_i >= 0 decides +alpha.
Decision detect_symbol_by_symbol(const link::SlotPair& observation, const link::Codebook& codebook);

inline constexpr std::size_t kQrdHypotheses = link::Codebook::kSize;
inline constexpr std::size_t kBaselineHypotheses = 2;

/// Symbol error counts. `trials` counts transmitted BPSK symbols (two per
/// codeword for the rotated scheme). ci_half_width is the 95% normal
/// approximation 1.96 sqrt(ser (1 - ser) / trials).
struct SerEstimate {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double ser = 0.0;
  double ci_half_width = 0.0;
  std::uint64_t seed = 0;
  /// Codeword (block) level counts; equal to the symbol counts for the baseline.
  std::uint64_t codeword_errors = 0;
  std::uint64_t codeword_trials = 0;

  static SerEstimate from_counts(std::uint64_t errors, std::uint64_t trials, std::uint64_t codeword_errors,
                                 std::uint64_t codeword_trials, std::uint64_t seed);
  double codeword_error_rate() const;
};

struct MonteCarloOptions {
  std::uint64_t block_size = 1u << 16;
  unsigned threads = 1;
  /// Stop at the first block boundary where the running symbol-error count
  /// reaches this value; 0 spends the whole trial budget.
  std::uint64_t target_errors = 200;
};

/// Rotated two-slot scheme. `trials` caps the number of codewords sent.
/// Trial t draws everything from RandomStream(cfg.seed, t), so results do
/// not depend on the thread count, and without early stopping not on the
/// block size either.
SerEstimate run_monte_carlo(const link::LinkConfig& cfg, std::uint64_t trials, const MonteCarloOptions& opts = {});
SerEstimate run_monte_carlo(const link::LinkConfig& cfg, std::uint64_t trials, std::uint64_t block_size);

/// Single-slot, unrotated BPSK with sign detection. `trials` counts symbols.
SerEstimate run_monte_carlo_baseline(const link::LinkConfig& cfg, std::uint64_t trials,
                                     const MonteCarloOptions& opts = {});

/// Frequency of the pairwise event ||y - H x~||^2 < ||y - H x||^2 for the
/// representative pair of a class under random fading and noise.
struct PairwiseEstimate {
  std::uint64_t events = 0;
  std::uint64_t trials = 0;
  double frequency = 0.0;
};

PairwiseEstimate run_pairwise_monte_carlo(const link::LinkConfig& cfg, link::PairClass pair_class,
                                          std::uint64_t trials, const MonteCarloOptions& opts = {});

/// Same event with the fading held at `fading`; only the noise is random.
PairwiseEstimate run_conditional_pairwise_monte_carlo(const link::LinkConfig& cfg, link::PairClass pair_class,
                                                      const channel::IrradiancePair& fading, std::uint64_t trials,
                                                      const MonteCarloOptions& opts = {});

}  // namespace qrd::detector
