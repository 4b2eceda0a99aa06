#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Experiment manifests. Two spellings are accepted: a flat TOML-style
// `key = value` file and the equivalent JSON object.
//
//   eta = 0.8
//   epsilon = 0.5
//   zeta = 1.2
//   n_grid = "logspace(1, 2000, 12)"   # or [10, 20, 40]
//   theta_grid_deg = "linspace(0, 45, 91)"
//   beta_grid = "linspace(0, 1, 101)"
//   surface_n = 80
//   trials = 1000000
//   seed = 1
//   scheme = "both"          # qrd | baseline | both
//   analysis = "all"         # mc | exact | asymptotic | all
//   squeezing = "both"       # optimal | none | both
//   block_size = 65536
//   target_errors = 200

namespace qrd::config {

/// Schema violation; `field()` is the offending key path, e.g. "n_grid[2]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class SchemeSelector { qrd, baseline, both };
enum class MethodSelector { mc, exact, asymptotic, all };
enum class SqueezingSelector { optimal, none, both };

struct ExperimentConfig {
  double eta = 0.8;
  double epsilon = 0.5;
  double zeta = 1.2;
  std::vector<double> n_grid;
  std::vector<double> theta_grid_deg;
  std::vector<double> beta_grid;
  double surface_n = 80.0;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  SchemeSelector scheme = SchemeSelector::both;
  MethodSelector analysis = MethodSelector::all;
  SqueezingSelector squeezing = SqueezingSelector::both;
  std::uint64_t block_size = 1u << 16;
  std::uint64_t target_errors = 200;

  /// Throws ConfigError naming the first field out of range.
  void validate() const;
  std::vector<double> theta_grid_rad() const;
};

/// Defaults: the strong-turbulence link (eta 0.8, shapes 0.5 / 1.2), N on
/// logspace(1, 2000, 12), a 0.5 degree theta grid on [0, 45] and a 0.01 beta grid.
ExperimentConfig default_config();

/// Parses either spelling (JSON when the first non-blank character is '{').
/// Unknown keys are rejected. Missing keys keep their defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The resolved config as compact single-line JSON, angles in degrees.
std::string to_json(const ExperimentConfig& cfg);

/// "linspace(a, b, n)" or "logspace(a, b, n)" (a and b are the end values).
std::vector<double> parse_grid_spec(std::string_view spec, const std::string& field);

const char* to_string(SchemeSelector s);
const char* to_string(MethodSelector m);
const char* to_string(SqueezingSelector s);

}  // namespace qrd::config
