#include "qrd/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace qrd::config {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drops a trailing '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

json parse_scalar(std::string_view value, const std::string& key, int line_no) {
  auto fail = [&](const std::string& why) {
    throw ConfigError(key, "line " + std::to_string(line_no) + ": " + why);
  };
  if (value.empty()) fail("missing value");
  if (value.front() == '"') {
    if (value.size() < 2 || value.back() != '"') fail("unterminated string");
    return std::string(value.substr(1, value.size() - 2));
  }
  if (value.front() == '[') {
    // TOML allows a trailing comma before the closing bracket; JSON does not.
    std::string list(value);
    const auto close = list.find_last_not_of(" \t\r\n", list.size() - 2);
    if (close != std::string::npos && list[close] == ',') list.erase(close, 1);
    try {
      return json::parse(list);
    } catch (const json::parse_error&) {
      fail("malformed list");
    }
  }
  if (value == "true") return true;
  if (value == "false") return false;
  try {
    return json::parse(value);
  } catch (const json::parse_error&) {
  }
  for (char c : value) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) fail("cannot parse value '" + std::string(value) + "'");
  }
  return std::string(value);
}

json parse_key_value(std::string_view text) {
  json out = json::object();
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    std::string value(trim(line.substr(eq + 1)));
    const int start_line = line_no;
    // A list may continue over several lines until its closing bracket.
    while (!value.empty() && value.front() == '[' && value.find(']') == std::string::npos) {
      if (!std::getline(in, raw)) throw ConfigError(key, "unterminated list starting on line " + std::to_string(start_line));
      ++line_no;
      value += ' ';
      value += trim(strip_comment(raw));
    }
    if (out.contains(key)) throw ConfigError(key, "duplicate key on line " + std::to_string(line_no));
    out[key] = parse_scalar(value, key, start_line);
  }
  return out;
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(key, "must be non-negative");
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(key, "expected a non-negative integer");
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_grid(const json& v, const std::string& key) {
  if (v.is_string()) return parse_grid_spec(v.get<std::string>(), key);
  if (!v.is_array()) throw ConfigError(key, "expected a list of numbers or a linspace/logspace string");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

template <typename Enum, std::size_t K>
Enum get_choice(const json& v, const std::string& key, const std::pair<const char*, Enum> (&choices)[K]) {
  const std::string s = get_string(v, key);
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (s == name) return value;
    allowed += allowed.empty() ? name : std::string("|") + name;
  }
  throw ConfigError(key, "expected one of " + allowed + " (got '" + s + "')");
}

constexpr std::pair<const char*, SchemeSelector> kSchemes[] = {
    {"qrd", SchemeSelector::qrd}, {"baseline", SchemeSelector::baseline}, {"both", SchemeSelector::both}};
constexpr std::pair<const char*, MethodSelector> kMethods[] = {{"mc", MethodSelector::mc},
                                                               {"exact", MethodSelector::exact},
                                                               {"asymptotic", MethodSelector::asymptotic},
                                                               {"all", MethodSelector::all}};
constexpr std::pair<const char*, SqueezingSelector> kSqueezing[] = {
    {"optimal", SqueezingSelector::optimal}, {"none", SqueezingSelector::none}, {"both", SqueezingSelector::both}};

ExperimentConfig from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  ExperimentConfig cfg = default_config();
  for (const auto& [key, v] : root.items()) {
    if (key == "eta") cfg.eta = get_number(v, key);
    else if (key == "epsilon") cfg.epsilon = get_number(v, key);
    else if (key == "zeta") cfg.zeta = get_number(v, key);
    else if (key == "n_grid") cfg.n_grid = get_grid(v, key);
    else if (key == "theta_grid_deg") cfg.theta_grid_deg = get_grid(v, key);
    else if (key == "beta_grid") cfg.beta_grid = get_grid(v, key);
    else if (key == "surface_n") cfg.surface_n = get_number(v, key);
    else if (key == "trials") cfg.trials = get_count(v, key);
    else if (key == "seed") cfg.seed = get_count(v, key);
    else if (key == "scheme") cfg.scheme = get_choice(v, key, kSchemes);
    else if (key == "analysis") cfg.analysis = get_choice(v, key, kMethods);
    else if (key == "squeezing") cfg.squeezing = get_choice(v, key, kSqueezing);
    else if (key == "block_size") cfg.block_size = get_count(v, key);
    else if (key == "target_errors") cfg.target_errors = get_count(v, key);
    else throw ConfigError(key, "unknown key");
  }
  cfg.validate();
  return cfg;
}

void check_grid(const std::vector<double>& grid, const std::string& key, double lo, double hi) {
  if (grid.empty()) throw ConfigError(key, "grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::isfinite(grid[i]) && grid[i] >= lo && grid[i] <= hi)) {
      std::ostringstream os;
      os << "value " << grid[i] << " outside [" << lo << ", " << hi << "]";
      throw ConfigError(key + "[" + std::to_string(i) + "]", os.str());
    }
  }
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.n_grid = parse_grid_spec("logspace(1, 2000, 12)", "n_grid");
  cfg.theta_grid_deg = parse_grid_spec("linspace(0, 45, 91)", "theta_grid_deg");
  cfg.beta_grid = parse_grid_spec("linspace(0, 1, 101)", "beta_grid");
  return cfg;
}

void ExperimentConfig::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta", "must lie in [0, 1]");
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
  if (!(std::isfinite(zeta) && zeta > 0.0)) throw ConfigError("zeta", "must be positive");
  if (std::abs(epsilon - zeta) < 1e-6 * std::max(epsilon, zeta)) {
    throw ConfigError("zeta", "epsilon and zeta must differ");
  }
  if (std::abs(epsilon - zeta - std::round(epsilon - zeta)) < 1e-12) {
    throw ConfigError("zeta", "epsilon - zeta must not be an integer");
  }
  check_grid(n_grid, "n_grid", 0.0, 1e12);
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > 0.0)) throw ConfigError("n_grid[" + std::to_string(i) + "]", "must be positive");
  }
  check_grid(theta_grid_deg, "theta_grid_deg", 0.0, 45.0);
  check_grid(beta_grid, "beta_grid", 0.0, 1.0);
  if (!(std::isfinite(surface_n) && surface_n > 0.0)) throw ConfigError("surface_n", "must be positive");
  if (block_size == 0) throw ConfigError("block_size", "must be at least 1");
}

std::vector<double> ExperimentConfig::theta_grid_rad() const {
  std::vector<double> out;
  out.reserve(theta_grid_deg.size());
  for (double d : theta_grid_deg) out.push_back(d * std::numbers::pi / 180.0);
  return out;
}

std::vector<double> parse_grid_spec(std::string_view spec, const std::string& field) {
  spec = trim(spec);
  const auto open = spec.find('(');
  if (open == std::string_view::npos || spec.back() != ')') {
    throw ConfigError(field, "expected linspace(a, b, n) or logspace(a, b, n)");
  }
  const std::string kind(trim(spec.substr(0, open)));
  if (kind != "linspace" && kind != "logspace") throw ConfigError(field, "unknown grid kind '" + kind + "'");
  json args;
  try {
    args = json::parse("[" + std::string(spec.substr(open + 1, spec.size() - open - 2)) + "]");
  } catch (const json::parse_error&) {
    throw ConfigError(field, "malformed grid arguments");
  }
  if (args.size() != 3) throw ConfigError(field, "grid needs exactly three arguments");
  const double a = get_number(args[0], field);
  const double b = get_number(args[1], field);
  const std::uint64_t n = get_count(args[2], field);
  if (n == 0 || n > 1'000'000) throw ConfigError(field, "point count must lie in [1, 1000000]");
  if (kind == "logspace" && !(a > 0.0 && b > 0.0)) throw ConfigError(field, "logspace end points must be positive");
  std::vector<double> out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(i);
    const double span = n == 1 ? 1.0 : static_cast<double>(n - 1);
    out[i] = kind == "linspace" ? a + (b - a) * di / span : std::exp(std::log(a) + (std::log(b) - std::log(a)) * di / span);
  }
  // Hit the end points exactly.
  out.front() = a;
  if (n > 1) out.back() = b;
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json root;
    try {
      root = json::parse(body);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    return from_json(root);
  }
  return from_json(parse_key_value(text));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const ExperimentConfig& cfg) {
  json j;
  j["eta"] = cfg.eta;
  j["epsilon"] = cfg.epsilon;
  j["zeta"] = cfg.zeta;
  j["n_grid"] = cfg.n_grid;
  j["theta_grid_deg"] = cfg.theta_grid_deg;
  j["beta_grid"] = cfg.beta_grid;
  j["surface_n"] = cfg.surface_n;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["scheme"] = to_string(cfg.scheme);
  j["analysis"] = to_string(cfg.analysis);
  j["squeezing"] = to_string(cfg.squeezing);
  j["block_size"] = cfg.block_size;
  j["target_errors"] = cfg.target_errors;
  return j.dump();
}

const char* to_string(SchemeSelector s) {
  for (const auto& [name, value] : kSchemes) {
    if (value == s) return name;
  }
  return "?";
}

const char* to_string(MethodSelector m) {
  for (const auto& [name, value] : kMethods) {
    if (value == m) return name;
  }
  return "?";
}

const char* to_string(SqueezingSelector s) {
  for (const auto& [name, value] : kSqueezing) {
    if (value == s) return name;
  }
  return "?";
}

}  // namespace qrd::config
