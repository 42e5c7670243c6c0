#include "bdns/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "bdns/error.hpp"
#include "json.hpp"

namespace bdns {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& base, const char* suffix) {
  return std::filesystem::path(base.string() + suffix);
}

}  // namespace

void write_snapshot(const std::filesystem::path& base, const ScalarField& f, const std::string& name, double time) {
  const Grid& g = f.grid();
  {
    std::ofstream out(with_suffix(base, ".bin"), std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + with_suffix(base, ".bin").string());
    const auto v = f.values();
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!out) throw Error(ErrorCode::Io, "short write to " + with_suffix(base, ".bin").string());
  }
  nlohmann::json meta = {{"dim", g.dim()},
                         {"points_per_axis", g.points_per_axis()},
                         {"length", g.length()},
                         {"name", name},
                         {"time", time}};
  std::ofstream out(with_suffix(base, ".json"), std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + with_suffix(base, ".json").string());
  out << meta.dump(2) << '\n';
}

Snapshot read_snapshot(const std::filesystem::path& base) {
  std::ifstream js(with_suffix(base, ".json"));
  if (!js) throw Error(ErrorCode::Io, "cannot open " + with_suffix(base, ".json").string());
  SnapshotMeta meta;
  try {
    const auto j = nlohmann::json::parse(js);
    meta.dim = j.at("dim").get<int>();
    meta.points_per_axis = j.at("points_per_axis").get<int>();
    meta.length = j.at("length").get<double>();
    meta.name = j.at("name").get<std::string>();
    meta.time = j.at("time").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad snapshot sidecar: ") + e.what());
  }
  const Grid g = Grid::make(meta.dim, meta.points_per_axis, meta.length);
  std::vector<double> values(g.size());
  std::ifstream bin(with_suffix(base, ".bin"), std::ios::binary);
  if (!bin) throw Error(ErrorCode::Io, "cannot open " + with_suffix(base, ".bin").string());
  bin.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double))) {
    throw Error(ErrorCode::Io, "snapshot payload is truncated");
  }
  return {ScalarField(g, std::move(values)), meta};
}

}  // namespace bdns
