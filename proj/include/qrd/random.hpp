#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace qrd {

/// Counter-addressed random stream: xoshiro256** whose state is derived from
/// (master seed, domain, index) through SplitMix64. Streams with different
/// coordinates are independent for all practical purposes, so Monte Carlo
/// work can be addressed per trial and stays identical under any split
/// into blocks or threads.
///
/// Not thread-safe; give each thread (or trial) its own stream.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t domain = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Gamma variate with the given shape and scale (mean shape * scale).
  double gamma(double shape, double scale);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_[4];
  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> gamma_;
};

/// Stream domains keep the simulators that share a master seed apart.
namespace stream_domain {
inline constexpr std::uint64_t channel_samples = 1;
inline constexpr std::uint64_t qrd_trials = 2;
inline constexpr std::uint64_t baseline_trials = 3;
inline constexpr std::uint64_t pairwise_trials = 4;
inline constexpr std::uint64_t validation = 5;
inline constexpr std::uint64_t sweep_points = 6;
}  // namespace stream_domain

}  // namespace qrd
