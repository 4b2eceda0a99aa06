// qrd_sim: sweeps, design surfaces, optimiser reports and self-checks for the
// rotated two-slot BPSK link over Gamma-Gamma turbulence.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 validation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qrd/analysis.hpp"
#include "qrd/config.hpp"
#include "qrd/experiments.hpp"
#include "qrd/validation.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

bool write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis of rotated two-slot BPSK with displaced squeezed states over Gamma-Gamma "
               "turbulence"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string format = "csv";
  app.add_option("--config", config_path, "Experiment config (key = value or JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Write output here instead of standard output");
  app.add_option("--seed", seed, "Master seed; overrides the config");
  app.add_option("--threads", threads, "Worker threads for Monte Carlo and surface evaluation")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("ser-sweep", "SER versus photon budget: Monte Carlo, union bound and asymptote");
  auto* surf = app.add_subcommand("surface", "Union-bound SER over the theta x beta grid");
  auto* opt = app.add_subcommand("optimize", "Closed-form versus numeric optimum design (JSON)");
  auto* val = app.add_subcommand("validate", "Special-function, Laplace-transform and sampler checks");

  std::optional<double> n_total;
  opt->add_option("--n", n_total, "Photon budget N (default: surface_n of the config)");
  double lambda_perturbation = 0.0;
  std::size_t samples = 200'000;
  val->add_option("--lambda-perturbation", lambda_perturbation, "Relative error injected into Lambda");
  val->add_option("--samples", samples, "Sampler test size")->check(CLI::Range(std::size_t{1000}, std::size_t{100'000'000}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    qrd::config::ExperimentConfig cfg =
        config_path.empty() ? qrd::config::default_config() : qrd::config::load_config(config_path);
    if (seed) cfg.seed = *seed;
    cfg.validate();

    qrd::experiments::RunOptions run;
    run.threads = threads;
    run.format = format == "json" ? qrd::experiments::OutputFormat::json : qrd::experiments::OutputFormat::csv;

    if (*val) {
      qrd::validation::ValidationOptions vo;
      vo.seed = cfg.seed;
      vo.samples = samples;
      vo.lambda_perturbation = lambda_perturbation;
      const auto results = qrd::validation::run_validation(vo);
      if (!write_output(qrd::validation::format_table(results), out_path)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitConfig;
      }
      return qrd::validation::all_passed(results) ? 0 : kExitValidation;
    }

    qrd::experiments::Output result;
    if (*sweep) result = qrd::experiments::ser_sweep(cfg, run);
    if (*surf) result = qrd::experiments::surface(cfg, run);
    if (*opt) result = qrd::experiments::optimize(n_total.value_or(cfg.surface_n), cfg);
    if (!write_output(result.text, out_path)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitConfig;
    }
    return result.numerical_failure ? kExitNumerical : 0;
  } catch (const qrd::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qrd::analysis::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::overflow_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
