#pragma once

// Field snapshots: raw little-endian float64 samples in row-major order
// (<base>.bin) with a JSON sidecar (<base>.json) holding
// {dim, points_per_axis, length, name, time}.

#include <filesystem>
#include <string>

#include "bdns/grid.hpp"

namespace bdns {

struct SnapshotMeta {
  int dim = 2;
  int points_per_axis = 0;
  double length = 0.0;
  std::string name;
  double time = 0.0;
};

/// Writes <base>.bin and <base>.json; throws Io on failure.
void write_snapshot(const std::filesystem::path& base, const ScalarField& f, const std::string& name, double time);

struct Snapshot {
  ScalarField field;
  SnapshotMeta meta;
};

Snapshot read_snapshot(const std::filesystem::path& base);

}  // namespace bdns
