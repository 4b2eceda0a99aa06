#include "qrd/detector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qrd/parallel.hpp"

namespace qrd::detector {

namespace {

struct Counts {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  std::uint64_t codeword_errors = 0;
  std::uint64_t codeword_trials = 0;

  Counts& operator+=(const Counts& o) {
    errors += o.errors;
    trials += o.trials;
    codeword_errors += o.codeword_errors;
    codeword_trials += o.codeword_trials;
    return *this;
  }
};

constexpr std::uint64_t kWaveBlocks = 16;

// Runs trials [0, trials) in blocks; blocks are merged strictly in index
// order so the early stop lands on the same block whatever the scheduling.
template <typename TrialFn>
Counts run_blocks(std::uint64_t trials, const MonteCarloOptions& opts, TrialFn&& trial) {
  if (trials == 0) throw std::invalid_argument("Monte Carlo: trials must be at least 1");
  if (opts.block_size == 0) throw std::invalid_argument("Monte Carlo: block_size must be at least 1");
  const std::uint64_t blocks = (trials + opts.block_size - 1) / opts.block_size;
  const std::uint64_t wave = opts.target_errors == 0 ? blocks : kWaveBlocks;
  Counts total;
  for (std::uint64_t first = 0; first < blocks; first += wave) {
    const std::uint64_t count = std::min(wave, blocks - first);
    std::vector<Counts> results(count);
    parallel_for(count, opts.threads, [&](std::uint64_t k) {
      const std::uint64_t begin = (first + k) * opts.block_size;
      const std::uint64_t end = std::min(trials, begin + opts.block_size);
      Counts c;
      for (std::uint64_t t = begin; t < end; ++t) c += trial(t);
      results[k] = c;
    });
    for (const auto& c : results) {
      total += c;
      if (opts.target_errors != 0 && total.errors >= opts.target_errors) return total;
    }
  }
  return total;
}

double metric(const link::SlotPair& y, double h1, double h2, const link::SlotPair& codeword) {
  const double d1 = y[0] - h1 * codeword[0];
  const double d2 = y[1] - h2 * codeword[1];
  return d1 * d1 + d2 * d2;
}

std::size_t alternative_index(std::size_t tx, link::PairClass pair_class) {
  return pair_class == link::PairClass::one_position ? tx ^ 2u : tx ^ 3u;
}

}  // namespace

Decision ml_detect(const link::SlotPair& observation, const channel::IrradiancePair& fading, double eta,
                   const link::Codebook& codebook) {
  const double h1 = std::sqrt(eta * fading.i1);
  const double h2 = std::sqrt(eta * fading.i2);
  std::size_t best = 0;
  double best_metric = metric(observation, h1, h2, codebook.codeword(0));
  for (std::size_t i = 1; i < link::Codebook::kSize; ++i) {
    const double m = metric(observation, h1, h2, codebook.codeword(i));
    if (m < best_metric) {
      best_metric = m;
      best = i;
    }
  }
  return {best, codebook.symbols(best)};
}

Decision ml_detect(const link::SlotPair& observation, const channel::IrradiancePair& fading,
                   const link::LinkConfig& cfg) {
  return ml_detect(observation, fading, cfg.eta, link::Codebook(cfg.design));
}

Decision detect_symbol_by_symbol(const link::SlotPair& observation, const link::Codebook& codebook) {
  const std::size_t index = link::Codebook::index_of(observation[0] < 0.0, observation[1] < 0.0);
  return {index, codebook.symbols(index)};
}

SerEstimate SerEstimate::from_counts(std::uint64_t errors, std::uint64_t trials, std::uint64_t codeword_errors,
                                     std::uint64_t codeword_trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("SerEstimate: trials must be positive");
  SerEstimate est;
  est.errors = errors;
  est.trials = trials;
  est.ser = static_cast<double>(errors) / static_cast<double>(trials);
  est.ci_half_width = 1.96 * std::sqrt(est.ser * (1.0 - est.ser) / static_cast<double>(trials));
  est.seed = seed;
  est.codeword_errors = codeword_errors;
  est.codeword_trials = codeword_trials;
  return est;
}

double SerEstimate::codeword_error_rate() const {
  return codeword_trials == 0 ? 0.0 : static_cast<double>(codeword_errors) / static_cast<double>(codeword_trials);
}

SerEstimate run_monte_carlo(const link::LinkConfig& cfg, std::uint64_t trials, const MonteCarloOptions& opts) {
  const link::Codebook book(cfg.design);
  const Counts c = run_blocks(trials, opts, [&](std::uint64_t t) {
    RandomStream rs(cfg.seed, t, stream_domain::qrd_trials);
    const std::size_t tx = rs.below(link::Codebook::kSize);
    const double i1 = channel::draw(cfg.channel, rs);
    const double i2 = channel::draw(cfg.channel, rs);
    const channel::IrradiancePair fading(i1, i2);
    const auto y = link::homodyne_observe(cfg, book.codeword(tx), fading, rs);
    const auto wrong = static_cast<std::uint64_t>(std::popcount(tx ^ ml_detect(y, fading, cfg.eta, book).index));
    return Counts{wrong, 2, wrong > 0 ? 1u : 0u, 1};
  });
  return SerEstimate::from_counts(c.errors, c.trials, c.codeword_errors, c.codeword_trials, cfg.seed);
}

SerEstimate run_monte_carlo(const link::LinkConfig& cfg, std::uint64_t trials, std::uint64_t block_size) {
  MonteCarloOptions opts;
  opts.block_size = block_size;
  return run_monte_carlo(cfg, trials, opts);
}

SerEstimate run_monte_carlo_baseline(const link::LinkConfig& cfg, std::uint64_t trials,
                                     const MonteCarloOptions& opts) {
  const double alpha = cfg.design.alpha();
  const double sigma = std::sqrt(cfg.design.sigma_q_sq());
  const Counts c = run_blocks(trials, opts, [&](std::uint64_t t) {
    RandomStream rs(cfg.seed, t, stream_domain::baseline_trials);
    const bool negative = rs.below(2) == 1;
    const double fade = channel::draw(cfg.channel, rs);
    const double y = std::sqrt(cfg.eta * fade) * (negative ? -alpha : alpha) + sigma * rs.normal();
    const std::uint64_t wrong = (y < 0.0) != negative ? 1u : 0u;
    return Counts{wrong, 1, wrong, 1};
  });
  return SerEstimate::from_counts(c.errors, c.trials, c.codeword_errors, c.codeword_trials, cfg.seed);
}

PairwiseEstimate run_pairwise_monte_carlo(const link::LinkConfig& cfg, link::PairClass pair_class,
                                          std::uint64_t trials, const MonteCarloOptions& opts) {
  const link::Codebook book(cfg.design);
  constexpr std::size_t tx = 0;
  MonteCarloOptions fixed = opts;
  fixed.target_errors = 0;
  const Counts c = run_blocks(trials, fixed, [&](std::uint64_t t) {
    RandomStream rs(cfg.seed, t, stream_domain::pairwise_trials);
    const double i1 = channel::draw(cfg.channel, rs);
    const double i2 = channel::draw(cfg.channel, rs);
    const channel::IrradiancePair fading(i1, i2);
    const auto y = link::homodyne_observe(cfg, book.codeword(tx), fading, rs);
    const double h1 = std::sqrt(cfg.eta * i1);
    const double h2 = std::sqrt(cfg.eta * i2);
    const bool event = metric(y, h1, h2, book.codeword(alternative_index(tx, pair_class))) <
                       metric(y, h1, h2, book.codeword(tx));
    return Counts{event ? 1u : 0u, 1, 0, 0};
  });
  return {c.errors, c.trials, static_cast<double>(c.errors) / static_cast<double>(c.trials)};
}

PairwiseEstimate run_conditional_pairwise_monte_carlo(const link::LinkConfig& cfg, link::PairClass pair_class,
                                                      const channel::IrradiancePair& fading, std::uint64_t trials,
                                                      const MonteCarloOptions& opts) {
  const link::Codebook book(cfg.design);
  // {0,3} and {1,2} mirror each other's squared differences, so with the
  // fading held fixed only the representative pair matches difference_vector.
  constexpr std::size_t tx = 0;
  const double h1 = std::sqrt(cfg.eta * fading.i1);
  const double h2 = std::sqrt(cfg.eta * fading.i2);
  MonteCarloOptions fixed = opts;
  fixed.target_errors = 0;
  const Counts c = run_blocks(trials, fixed, [&](std::uint64_t t) {
    RandomStream rs(cfg.seed, t, stream_domain::pairwise_trials);
    const auto y = link::homodyne_observe(cfg, book.codeword(tx), fading, rs);
    const bool event = metric(y, h1, h2, book.codeword(alternative_index(tx, pair_class))) <
                       metric(y, h1, h2, book.codeword(tx));
    return Counts{event ? 1u : 0u, 1, 0, 0};
  });
  return {c.errors, c.trials, static_cast<double>(c.errors) / static_cast<double>(c.trials)};
}

}  // namespace qrd::detector
