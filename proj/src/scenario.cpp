#include "bdns/scenario.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "bdns/random.hpp"

namespace bdns {

double default_amplitude(const std::string& name) {
  if (name == "v0_zero") return 0.1;
  if (name == "small_data") return 1e-3;
  if (name == "large_data") return 0.3;
  if (name == "manufactured") return 0.1;
  throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
}

ScalarField steep_random_field(const Grid& grid, std::uint64_t seed, std::uint64_t stream, double amplitude) {
  if (amplitude == 0.0) return ScalarField::zeros(grid);
  CounterRng rng(seed, stream);
  const double unit = grid.wavenumber_unit();
  ScalarField f = random_field(grid, rng, [unit](double r) { return std::exp(-0.5 * r / unit); });
  const double peak = f.max_abs();
  if (peak > 0.0) f *= amplitude / peak;
  return f;
}

ScalarField band_limited_field(const Grid& grid, std::uint64_t seed, std::uint64_t stream, double kmax,
                               double amplitude) {
  if (amplitude == 0.0) return ScalarField::zeros(grid);
  CounterRng rng(seed, stream);
  const double cut = kmax * grid.wavenumber_unit() * (1.0 + 1e-12);
  ScalarField f = random_field(grid, rng, [cut](double r) { return r <= cut ? 1.0 : 0.0; });
  const double peak = f.max_abs();
  if (peak > 0.0) f *= amplitude / peak;
  return f;
}

FieldTriple random_triple(const Grid& grid, std::uint64_t seed, double kmax) {
  const auto dim = static_cast<std::uint64_t>(grid.dim());
  ScalarField rho = band_limited_field(grid, seed, 0, kmax, 0.4) + ScalarField::constant(grid, 1.0);
  std::vector<ScalarField> u, v;
  for (std::uint64_t j = 0; j < dim; ++j) {
    u.push_back(band_limited_field(grid, seed, 1 + j, kmax, 1.0) + ScalarField::constant(grid, 0.1 * double(j + 1)));
    v.push_back(band_limited_field(grid, seed, 1 + dim + j, kmax, 1.0));
  }
  return {std::move(rho), VectorField(std::move(u)), VectorField(std::move(v))};
}

namespace {

struct Phases {
  std::array<double, 6> value{};
};

Phases draw_phases(std::uint64_t seed) {
  CounterRng rng(seed, 0x6d616e75ULL);
  Phases p;
  for (auto& x : p.value) x = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

ScalarField manufactured_q(const Grid& g, double a, const Phases& ph) {
  return ScalarField::from_function(g, [&](const Point& x) {
    const double z = g.dim() == 3 ? x[2] : 0.0;
    return a * (0.6 * std::sin(x[0] + ph.value[0]) + 0.3 * std::cos(x[1] + ph.value[1]) +
                0.2 * std::sin(x[0] + x[1] + z + ph.value[2]));
  });
}

VectorField manufactured_v(const Grid& g, double a, const Phases& ph) {
  std::vector<ScalarField> c;
  for (int j = 0; j < g.dim(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    c.push_back(ScalarField::from_function(g, [&](const Point& x) {
      const int next = (j + 1) % g.dim();
      const auto nn = static_cast<std::size_t>(next);
      return a * (std::sin(x[nn] + ph.value[3 + jj % 3]) + 0.5 * std::cos(x[jj] + 2.0 * x[nn] + ph.value[jj]) +
                  0.2 * (j + 1));
    }));
  }
  return VectorField(std::move(c));
}

void guard(const EffectiveState& s) {
  const double lo = 1.0 + s.q.min();
  if (!(lo > kDensityFloor)) {
    throw Error(ErrorCode::VacuumApproach, "scenario amplitude drives min density to " + std::to_string(lo));
  }
}

}  // namespace

EffectiveState scenario_init(const ScenarioConfig& sc, const Grid& g, const FluidModel& m) {
  (void)m;
  const double a = sc.amplitude.value_or(default_amplitude(sc.name));
  const double b = sc.velocity_amplitude.value_or(a);
  EffectiveState s{ScalarField::zeros(g), ScalarField::zeros(g), CurlField::zeros(g),
                   std::vector<double>(static_cast<std::size_t>(g.dim()), 0.0)};

  if (sc.name == "v0_zero") {
    s.q = ScalarField::from_function(g, [a](const Point& x) { return a * std::sin(x[0]); });
  } else if (sc.name == "small_data" || sc.name == "large_data") {
    s.q = steep_random_field(g, sc.seed, 0, a);
    std::vector<ScalarField> c;
    for (int j = 0; j < g.dim(); ++j) c.push_back(steep_random_field(g, sc.seed, 1 + static_cast<std::uint64_t>(j), b));
    const VectorField v(std::move(c));
    s.divv = divergence(v);
    s.curlv = curl_matrix(v);
  } else if (sc.name == "manufactured") {
    const Phases ph = draw_phases(sc.seed);
    s.q = manufactured_q(g, a, ph);
    const VectorField v = manufactured_v(g, b, ph);
    s.divv = divergence(v);
    s.curlv = curl_matrix(v);
    s.mean_v = v.mean();
  } else {
    throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + sc.name + "'");
  }
  guard(s);
  return s;
}

ClassicalState manufactured_classical(const Grid& g, double amplitude, std::uint64_t seed) {
  const Phases ph = draw_phases(seed);
  ScalarField rho = manufactured_q(g, amplitude, ph) + ScalarField::constant(g, 1.0);
  return {std::move(rho), manufactured_v(g, amplitude, ph)};
}

}  // namespace bdns
