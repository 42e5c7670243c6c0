#pragma once

#include "bdns/config.hpp"
#include "bdns/formulations.hpp"

namespace bdns {

/// Default amplitude of each named scenario.
double default_amplitude(const std::string& name);

/// Initial effective state for a named scenario:
///   v0_zero       q = a sin x1, v = 0 (a defaults to 0.1)
///   small_data    random steep-spectrum q and v with max|q| = max|v| = a (1e-3)
///   large_data    same construction at a = 0.3
///   manufactured  a few low modes with seed-dependent phases (a = 0.1)
/// Throws UnknownScenario, or VacuumApproach when min(1 + q) <= kDensityFloor.
EffectiveState scenario_init(const ScenarioConfig& scenario, const Grid& grid, const FluidModel& m);

/// Classical (rho, u) counterpart of the manufactured scenario.
ClassicalState manufactured_classical(const Grid& grid, double amplitude, std::uint64_t seed);

/// Random mean-free field with spectrum envelope exp(-|k|/2), rescaled to max|f| = amplitude.
ScalarField steep_random_field(const Grid& grid, std::uint64_t seed, std::uint64_t stream, double amplitude);

/// Random mean-free field with flat spectrum on 0 < |k| <= kmax (lattice units), max|f| = amplitude.
ScalarField band_limited_field(const Grid& grid, std::uint64_t seed, std::uint64_t stream, double kmax,
                               double amplitude);

/// Seeded (rho, u, v) triple with every field band-limited to |k| <= kmax and min rho >= 0.6.
struct FieldTriple {
  ScalarField rho;
  VectorField u;
  VectorField v;
};
FieldTriple random_triple(const Grid& grid, std::uint64_t seed, double kmax);

}  // namespace bdns
