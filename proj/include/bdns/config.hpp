#pragma once

// Run configuration, an INI document:
//
//   [model]    mu, alpha, gamma, dim (required); rho_bar (default 1)
//   [grid]     points_per_axis (required); length (default 2*pi)
//   [control]  dt, t_end (required); cfl_target (0.5), snapshot_every (10), cutoff_m (4)
//   [scenario] name (required: v0_zero | small_data | large_data | manufactured);
//              amplitude, velocity_amplitude (scenario defaults), seed (1)
//   [outputs]  directory (out), cadence (1: write every stored state)
//   [checks]   list, comma separated from entropy, mass, smoothing, transport, estimates
//              (default "mass, entropy")

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bdns/constitutive.hpp"
#include "bdns/error.hpp"
#include "bdns/evolution.hpp"

namespace bdns {

struct GridConfig {
  int points_per_axis = 64;
  double length = 0.0;
};

struct ScenarioConfig {
  std::string name;
  std::optional<double> amplitude;
  std::optional<double> velocity_amplitude;
  std::uint64_t seed = 1;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  int cadence = 1;
};

struct RunConfig {
  FluidModel model;
  GridConfig grid;
  StepControl control;
  ScenarioConfig scenario;
  OutputConfig outputs;
  std::vector<std::string> checks;
};

struct ConfigIssue {
  ErrorCode code;
  std::string key;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Throws ConfigError listing every offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& known_scenarios();
const std::vector<std::string>& known_checks();

}  // namespace bdns
