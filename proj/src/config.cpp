#include "bdns/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <type_traits>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace bdns {

namespace {

std::string summarize(const std::vector<ConfigIssue>& issues) {
  std::string msg;
  for (const auto& i : issues) {
    if (!msg.empty()) msg += "; ";
    msg += i.key + ": " + i.message;
  }
  return msg;
}

ErrorCode first_code(const std::vector<ConfigIssue>& issues) {
  return issues.empty() ? ErrorCode::BadValue : issues.front().code;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(const boost::property_tree::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) {
    auto v = tree_.get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  template <typename T>
  std::optional<T> number(const std::string& key, bool required) {
    const auto text = raw(key);
    if (!text) {
      if (required) issues.push_back({ErrorCode::MissingKey, key, "required key is missing"});
      return std::nullopt;
    }
    T value{};
    const char* first = text->data();
    const char* last = first + text->size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text->empty()) {
      issues.push_back({ErrorCode::BadValue, key, "cannot parse '" + *text + "'"});
      return std::nullopt;
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(value)) {
        issues.push_back({ErrorCode::BadValue, key, "value must be finite"});
        return std::nullopt;
      }
    }
    return value;
  }

  std::vector<ConfigIssue> issues;

 private:
  const boost::property_tree::ptree& tree_;
};

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(first_code(issues), summarize(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> names{"v0_zero", "small_data", "large_data", "manufactured"};
  return names;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"entropy", "mass", "smoothing", "transport", "estimates"};
  return names;
}

RunConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError({{ErrorCode::BadValue, "<document>", e.message() + " at line " + std::to_string(e.line())}});
  }

  Reader r(tree);
  RunConfig cfg;

  if (auto v = r.number<double>("model.mu", true)) cfg.model.mu = *v;
  if (auto v = r.number<double>("model.alpha", true)) cfg.model.alpha = *v;
  if (auto v = r.number<double>("model.gamma", true)) cfg.model.gamma = *v;
  if (auto v = r.number<int>("model.dim", true)) cfg.model.dim = *v;
  if (auto v = r.number<double>("model.rho_bar", false)) cfg.model.rho_bar = *v;

  if (auto v = r.number<int>("grid.points_per_axis", true)) cfg.grid.points_per_axis = *v;
  cfg.grid.length = 2.0 * std::numbers::pi;
  if (auto v = r.number<double>("grid.length", false)) cfg.grid.length = *v;

  if (auto v = r.number<double>("control.dt", true)) cfg.control.dt = *v;
  if (auto v = r.number<double>("control.t_end", true)) cfg.control.t_end = *v;
  cfg.control.snapshot_every = 10;
  if (auto v = r.number<double>("control.cfl_target", false)) cfg.control.cfl_target = *v;
  if (auto v = r.number<int>("control.snapshot_every", false)) cfg.control.snapshot_every = *v;
  if (auto v = r.number<int>("control.cutoff_m", false)) cfg.control.cutoff_m = *v;

  if (auto v = r.raw("scenario.name")) {
    cfg.scenario.name = *v;
    const auto& names = known_scenarios();
    if (std::find(names.begin(), names.end(), *v) == names.end()) {
      r.issues.push_back({ErrorCode::UnknownScenario, "scenario.name", "unknown scenario '" + *v + "'"});
    }
  } else {
    r.issues.push_back({ErrorCode::MissingKey, "scenario.name", "required key is missing"});
  }
  cfg.scenario.amplitude = r.number<double>("scenario.amplitude", false);
  cfg.scenario.velocity_amplitude = r.number<double>("scenario.velocity_amplitude", false);
  if (auto v = r.number<std::uint64_t>("scenario.seed", false)) cfg.scenario.seed = *v;

  if (auto v = r.raw("outputs.directory")) cfg.outputs.directory = *v;
  if (auto v = r.number<int>("outputs.cadence", false)) cfg.outputs.cadence = *v;

  std::string list = r.raw("checks.list").value_or("mass, entropy");
  std::istringstream items(list);
  for (std::string item; std::getline(items, item, ',');) {
    item = trim(item);
    if (item.empty()) continue;
    const auto& names = known_checks();
    if (std::find(names.begin(), names.end(), item) == names.end()) {
      r.issues.push_back({ErrorCode::BadValue, "checks.list", "unknown check '" + item + "'"});
    } else if (std::find(cfg.checks.begin(), cfg.checks.end(), item) == cfg.checks.end()) {
      cfg.checks.push_back(item);
    }
  }

  // Value ranges.
  auto bad = [&](const std::string& key, const std::string& msg) { r.issues.push_back({ErrorCode::BadValue, key, msg}); };
  if (!(cfg.control.dt > 0.0)) bad("control.dt", "must be positive");
  if (!(cfg.control.t_end > 0.0)) bad("control.t_end", "must be positive");
  if (!(cfg.control.cfl_target > 0.0 && cfg.control.cfl_target <= 1.0)) bad("control.cfl_target", "must lie in (0, 1]");
  if (cfg.control.snapshot_every < 1) bad("control.snapshot_every", "must be at least 1");
  if (cfg.outputs.cadence < 1) bad("outputs.cadence", "must be at least 1");
  const int n = cfg.grid.points_per_axis;
  if (n < 8 || (n & (n - 1)) != 0) {
    r.issues.push_back({ErrorCode::NonPowerOfTwo, "grid.points_per_axis", "must be a power of two >= 8"});
  }
  if (!(cfg.grid.length > 0.0)) bad("grid.length", "must be positive");

  const bool model_complete = std::none_of(r.issues.begin(), r.issues.end(), [](const ConfigIssue& i) {
    return i.key.rfind("model.", 0) == 0;
  });
  if (model_complete) {
    for (const auto& v : validate_model(cfg.model)) {
      r.issues.push_back({ErrorCode::ModelInvalid, "model", std::string(to_string(v.code)) + ": " + v.message});
    }
  }

  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{ErrorCode::Io, path.string(), "cannot read config file"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace bdns
