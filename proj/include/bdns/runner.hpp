#pragma once

// Orchestration behind the CLI. A run writes into outputs.directory:
//
//   snapshots/s<index>_<field>.{bin,json}   q, divv and curl_<i><j> per stored state
//   trajectory.json                         times, mean_v, snapshot files, step stats, abort
//   timeseries.csv                          t,kinetic,potential,dissipation_curl,dissipation_pressure,mass
//   certificates.json                       one entry per requested check
//   error.json                              only when the run failed
//
// Exit codes: 0 run completed and hard checks (mass, entropy, transport)
// passed, 1 configuration error or failed hard check, 2 physics abort.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "bdns/config.hpp"
#include "bdns/evolution.hpp"

namespace bdns {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitAbort = 2;

struct CheckOutcome {
  nlohmann::json certificates;
  bool hard_passed = true;
};

/// Evaluates the configured checks on a trajectory. Degenerate or too short
/// inputs mark the entry as skipped instead of failing.
CheckOutcome run_checks(const RunConfig& config, const Trajectory& traj);

/// Time-series CSV of the stored states, written with shortest round-trip formatting.
std::string timeseries_csv(const FluidModel& m, const Trajectory& traj);

int execute(const RunConfig& config, std::ostream& log);
/// Re-runs the checks on the artifacts of a previous execute().
int check(const RunConfig& config, std::ostream& log);

/// Loads the config first; configuration problems give exit 1 and an error JSON on stderr.
int execute_file(const std::filesystem::path& config_path, std::ostream& log);
int check_file(const std::filesystem::path& config_path, std::ostream& log);

/// Identity residuals on seeded random band-limited triples; exit 0 when all are below 1e-10.
int identities(std::ostream& log, int samples = 20, std::uint64_t seed = 7);

}  // namespace bdns
