#include "qrd/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "qrd/analysis.hpp"
#include "qrd/detector.hpp"
#include "qrd/parallel.hpp"
#include "qrd/random.hpp"

namespace qrd::experiments {

namespace {

using nlohmann::json;

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

struct SweepRow {
  double n_photons;
  const char* scheme;
  double beta;
  double theta_deg;
  const char* method;
  double ser;
  double ci_half_width;
  std::uint64_t trials;
  std::uint64_t seed;
};

std::string header(const char* command, const config::ExperimentConfig& cfg, const char* columns) {
  std::string out;
  out += "# qrd_sim ";
  out += command;
  out += "\n# config: ";
  out += config::to_json(cfg);
  out += "\n# seed: ";
  out += std::to_string(cfg.seed);
  out += "\n# columns: ";
  out += columns;
  out += "\n";
  out += columns;
  out += "\n";
  return out;
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::vector<analysis::Squeezing> squeezing_modes(config::SqueezingSelector s) {
  switch (s) {
    case config::SqueezingSelector::optimal: return {analysis::Squeezing::on};
    case config::SqueezingSelector::none: return {analysis::Squeezing::off};
    case config::SqueezingSelector::both: break;
  }
  return {analysis::Squeezing::on, analysis::Squeezing::off};
}

std::vector<analysis::Scheme> schemes(config::SchemeSelector s) {
  switch (s) {
    case config::SchemeSelector::qrd: return {analysis::Scheme::qrd};
    case config::SchemeSelector::baseline: return {analysis::Scheme::baseline};
    case config::SchemeSelector::both: break;
  }
  return {analysis::Scheme::qrd, analysis::Scheme::baseline};
}

bool wants(config::MethodSelector selected, config::MethodSelector m) {
  return selected == config::MethodSelector::all || selected == m;
}

json design_block(const link::ModulationDesign& design, double ser, const analysis::PepPair& peps) {
  return {{"theta_deg", design.theta() * kDegPerRad},
          {"beta", design.beta()},
          {"r", design.r()},
          {"alpha", design.alpha()},
          {"ser", number(ser)},
          {"pep1", number(peps.pep1)},
          {"pep2", number(peps.pep2)}};
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t sweep_point_seed(std::uint64_t master_seed, std::uint64_t point) {
  RandomStream stream(master_seed, point, stream_domain::sweep_points);
  return stream();
}

Output ser_sweep(const config::ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const channel::GammaGammaParams ch(cfg.epsilon, cfg.zeta);
  std::vector<SweepRow> rows;
  std::vector<std::string> notes;
  Output out;

  detector::MonteCarloOptions mc;
  mc.block_size = cfg.block_size;
  mc.threads = opts.threads;
  mc.target_errors = cfg.target_errors;

  const bool run_mc = wants(cfg.analysis, config::MethodSelector::mc) && cfg.trials > 0;
  if (wants(cfg.analysis, config::MethodSelector::mc) && cfg.trials == 0) {
    notes.push_back("trials = 0: Monte Carlo rows skipped");
  }

  std::uint64_t mc_point = 0;
  for (double n : cfg.n_grid) {
    for (auto scheme : schemes(cfg.scheme)) {
      for (auto squeezing : squeezing_modes(cfg.squeezing)) {
        const bool qrd = scheme == analysis::Scheme::qrd;
        const double beta = squeezing == analysis::Squeezing::on ? analysis::beta_star(n) : 0.0;
        const double theta = qrd ? link::theta_star() : 0.0;
        const auto design = link::design_from_split(n, beta, theta);
        const char* scheme_name = qrd ? "qrd" : "baseline";
        auto row = [&](const char* method, double ser, double ci, std::uint64_t trials) {
          rows.push_back({n, scheme_name, beta, theta * kDegPerRad, method, ser, ci, trials, cfg.seed});
        };
        auto note = [&](const char* method, const std::string& text) {
          std::ostringstream os;
          os << "row n_photons=" << format_double(n) << " scheme=" << scheme_name << " beta=" << format_double(beta)
             << " method=" << method << ": " << text;
          notes.push_back(os.str());
        };

        if (run_mc) {
          const link::LinkConfig link_cfg(cfg.eta, ch, design, sweep_point_seed(cfg.seed, mc_point++));
          const auto est = qrd ? detector::run_monte_carlo(link_cfg, std::max<std::uint64_t>(1, cfg.trials / 2), mc)
                               : detector::run_monte_carlo_baseline(link_cfg, cfg.trials, mc);
          row("mc", est.ser, est.ci_half_width, est.trials);
          if (est.errors == 0) note("mc", "no errors observed within the trial cap");
        }
        if (wants(cfg.analysis, config::MethodSelector::exact)) {
          try {
            row("exact", qrd ? analysis::ser_union_qrd(design, cfg.eta, ch) : analysis::ser_baseline(design, cfg.eta, ch),
                0.0, 0);
          } catch (const std::exception& e) {
            row("exact", std::numeric_limits<double>::quiet_NaN(), 0.0, 0);
            note("exact", std::string("numerical failure: ") + e.what());
            out.numerical_failure = true;
          }
        }
        if (wants(cfg.analysis, config::MethodSelector::asymptotic)) {
          try {
            row("asymptotic",
                qrd ? analysis::asymptotic_ser_qrd(design, cfg.eta, ch)
                    : analysis::asymptotic_ser_baseline(design, cfg.eta, ch),
                0.0, 0);
            if (!analysis::asymptotic_reliable(design, cfg.eta, ch, scheme)) {
              note("asymptotic", "outside the high-SNR regime (Laplace asymptote off by more than 5%)");
            }
          } catch (const std::exception& e) {
            row("asymptotic", std::numeric_limits<double>::quiet_NaN(), 0.0, 0);
            note("asymptotic", std::string("numerical failure: ") + e.what());
            out.numerical_failure = true;
          }
        }
      }
    }
  }

  if (opts.format == OutputFormat::json) {
    json doc;
    doc["command"] = "ser-sweep";
    doc["config"] = json::parse(config::to_json(cfg));
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n_photons", r.n_photons},
                     {"scheme", r.scheme},
                     {"beta", r.beta},
                     {"theta_deg", r.theta_deg},
                     {"method", r.method},
                     {"ser", number(r.ser)},
                     {"ci_half_width", r.ci_half_width},
                     {"trials", r.trials},
                     {"seed", r.seed}});
    }
    doc["rows"] = arr;
    doc["notes"] = notes;
    out.text = doc.dump(2) + "\n";
    return out;
  }

  std::string text = header("ser-sweep", cfg, kSweepColumns);
  for (const auto& r : rows) {
    text += format_double(r.n_photons) + "," + r.scheme + "," + format_double(r.beta) + "," +
            format_double(r.theta_deg) + "," + r.method + "," + format_double(r.ser) + "," +
            format_double(r.ci_half_width) + "," + std::to_string(r.trials) + "," + std::to_string(r.seed) + "\n";
  }
  for (const auto& n : notes) text += "# note: " + n + "\n";
  out.text = std::move(text);
  return out;
}

Output surface(const config::ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const channel::GammaGammaParams ch(cfg.epsilon, cfg.zeta);
  const auto thetas = cfg.theta_grid_rad();
  const auto& betas = cfg.beta_grid;
  const std::size_t cols = betas.size();
  std::vector<double> ser(thetas.size() * cols, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(ser.size());

  parallel_for(ser.size(), opts.threads, [&](std::uint64_t k) {
    try {
      ser[k] = analysis::ser_union_qrd(link::design_from_split(cfg.surface_n, betas[k % cols], thetas[k / cols]),
                                       cfg.eta, ch);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });

  Output out;
  std::size_t best = ser.size();
  for (std::size_t k = 0; k < ser.size(); ++k) {
    if (!errors[k].empty()) out.numerical_failure = true;
    if (std::isfinite(ser[k]) && (best == ser.size() || ser[k] < ser[best])) best = k;
  }
  const auto closed = analysis::closed_form_design(cfg.surface_n);
  const double closed_ser =
      analysis::ser_union_qrd(link::design_from_split(cfg.surface_n, closed.beta, closed.theta), cfg.eta, ch);

  if (opts.format == OutputFormat::json) {
    json doc;
    doc["command"] = "surface";
    doc["config"] = json::parse(config::to_json(cfg));
    json arr = json::array();
    for (std::size_t k = 0; k < ser.size(); ++k) {
      json r = {{"theta_deg", cfg.theta_grid_deg[k / cols]}, {"beta", betas[k % cols]}, {"ser", number(ser[k])}};
      if (!errors[k].empty()) r["error"] = errors[k];
      arr.push_back(r);
    }
    doc["rows"] = arr;
    if (best < ser.size()) {
      doc["minimum"] = {{"theta_deg", cfg.theta_grid_deg[best / cols]}, {"beta", betas[best % cols]}, {"ser", ser[best]}};
    }
    doc["closed_form"] = {{"theta_deg", closed.theta * kDegPerRad}, {"beta", closed.beta}, {"ser", closed_ser}};
    out.text = doc.dump(2) + "\n";
    return out;
  }

  std::string text = header("surface", cfg, kSurfaceColumns);
  for (std::size_t k = 0; k < ser.size(); ++k) {
    text += format_double(cfg.theta_grid_deg[k / cols]) + "," + format_double(betas[k % cols]) + "," +
            format_double(ser[k]) + "\n";
  }
  for (std::size_t k = 0; k < ser.size(); ++k) {
    if (!errors[k].empty()) {
      text += "# note: theta_deg=" + format_double(cfg.theta_grid_deg[k / cols]) +
              " beta=" + format_double(betas[k % cols]) + ": numerical failure: " + errors[k] + "\n";
    }
  }
  if (best < ser.size()) {
    text += "# minimum: theta_deg=" + format_double(cfg.theta_grid_deg[best / cols]) +
            " beta=" + format_double(betas[best % cols]) + " ser=" + format_double(ser[best]) + "\n";
  }
  text += "# closed_form: theta_deg=" + format_double(closed.theta * kDegPerRad) + " beta=" + format_double(closed.beta) +
          " ser=" + format_double(closed_ser) + "\n";
  out.text = std::move(text);
  return out;
}

Output optimize(double n_total, const config::ExperimentConfig& cfg) {
  if (!(std::isfinite(n_total) && n_total > 0.0)) throw config::ConfigError("n", "photon budget must be positive");
  cfg.validate();
  const channel::GammaGammaParams ch(cfg.epsilon, cfg.zeta);
  constexpr double kThetaTolDeg = 0.2;
  constexpr double kBetaTol = 0.01;

  Output out;
  auto block = [&](const analysis::DesignReport& rep) {
    const auto design = link::design_from_split(n_total, rep.point.beta, rep.point.theta);
    json b = design_block(design, rep.ser, analysis::pep_pair(design, cfg.eta, ch));
    b["converged"] = rep.converged;
    b["evaluations"] = rep.evaluations;
    b["diagnostic"] = rep.diagnostic;
    if (!rep.converged) out.numerical_failure = true;
    return b;
  };

  const auto closed = analysis::optimal_design(n_total, ch, cfg.eta, analysis::DesignMode::closed_form);
  const auto numeric = analysis::optimal_design(n_total, ch, cfg.eta, analysis::DesignMode::numeric);
  const auto worst = analysis::optimal_design(n_total, ch, cfg.eta, analysis::DesignMode::numeric,
                                              analysis::DesignObjective::worst_pair);
  const double d_theta = (numeric.point.theta - closed.point.theta) * kDegPerRad;
  const double d_beta = numeric.point.beta - closed.point.beta;
  const auto closed_design = link::design_from_split(n_total, closed.point.beta, closed.point.theta);

  json doc;
  doc["command"] = "optimize";
  doc["n_total"] = n_total;
  doc["eta"] = cfg.eta;
  doc["epsilon"] = cfg.epsilon;
  doc["zeta"] = cfg.zeta;
  doc["closed_form"] = block(closed);
  doc["numeric"] = block(numeric);
  doc["numeric_worst_pair"] = block(worst);
  doc["delta"] = {{"theta_deg", d_theta}, {"beta", d_beta}};
  doc["tolerance"] = {{"theta_deg", kThetaTolDeg}, {"beta", kBetaTol}};
  doc["agreement"] = {{"theta", std::abs(d_theta) <= kThetaTolDeg}, {"beta", std::abs(d_beta) <= kBetaTol}};
  doc["low_snr_caveat"] = !analysis::asymptotic_reliable(closed_design, cfg.eta, ch, analysis::Scheme::qrd);
  out.text = doc.dump(2) + "\n";
  return out;
}

}  // namespace qrd::experiments
