#pragma once

#include <cstdint>
#include <string>

#include "qrd/config.hpp"

// The data-producing commands behind the command-line tool. Each returns the
// complete output document so it can be written, compared or hashed as is.

namespace qrd::experiments {

enum class OutputFormat { csv, json };

struct RunOptions {
  unsigned threads = 1;
  OutputFormat format = OutputFormat::csv;
};

struct Output {
  std::string text;
  /// Some row hit a numerical failure (annotated in the output; the run went on).
  bool numerical_failure = false;
};

/// Fixed CSV column order of the sweep.
inline constexpr const char* kSweepColumns = "n_photons,scheme,beta,theta_deg,method,ser,ci_half_width,trials,seed";
inline constexpr const char* kSurfaceColumns = "theta_deg,beta,ser";

/// One row per (N, scheme, squeezing mode, method). Squeezing "optimal" uses
/// beta = N / (2N + 1), "none" beta = 0; the rotated scheme runs at
/// theta = atan(2) / 2 and the baseline at theta = 0. `trials` caps the
/// number of simulated BPSK symbols per Monte Carlo row.
///
/// Monte Carlo point k (in row order) draws from the stream seed
/// sweep_point_seed(cfg.seed, k); the seed column shows the master seed.
Output ser_sweep(const config::ExperimentConfig& cfg, const RunOptions& opts);

/// Union bound of the rotated scheme over theta_grid_deg x beta_grid at
/// N = surface_n, followed by the grid minimum and the closed-form optimum
/// as trailing comment records.
Output surface(const config::ExperimentConfig& cfg, const RunOptions& opts);

/// JSON report comparing the closed-form and numeric optimum at budget N
/// for the channel and eta of `cfg`.
Output optimize(double n_total, const config::ExperimentConfig& cfg);

std::uint64_t sweep_point_seed(std::uint64_t master_seed, std::uint64_t point);

/// 17 significant digits; "nan" and "inf" for non-finite values.
std::string format_double(double x);

}  // namespace qrd::experiments
