#pragma once

#include <vector>

#include "bdns/evolution.hpp"
#include "bdns/littlewood_paley.hpp"

namespace bdns {

struct EntropyReport {
  /// int 1/2 rho |v|^2
  double kinetic = 0.0;
  /// int rho |v|^2, the unhalved spelling, reported alongside
  double kinetic_unhalved = 0.0;
  /// int Pi(rho) - Pi(rho_bar)
  double potential = 0.0;
  /// int mu(rho)/2 sum_ij (curl v)_ij^2
  double dissipation_curl = 0.0;
  /// int grad P(rho) . grad phi(rho)
  double dissipation_pressure = 0.0;
  /// kinetic + potential
  double total = 0.0;
};

EntropyReport entropy_report(const FluidModel& m, const ScalarField& rho, const VectorField& v);
EntropyReport entropy_report(const FluidModel& m, const EffectiveState& state);

struct EntropyCheck {
  std::vector<double> totals;
  double max_increase = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Tolerance 1e-8 E(0) + 10 dt^2 E(0) on every increment of the total.
EntropyCheck entropy_monotone_check(std::span<const double> totals, double dt);
EntropyCheck entropy_monotone_check(const Trajectory& traj, const FluidModel& m);

double mass_total(const ScalarField& rho);
/// max_t |mass(t) - mass(0)| over the recorded states.
double mass_drift(const Trajectory& traj);

/// Least-squares slope of log(values) against times.
double log_slope(std::span<const double> times, std::span<const double> values);

struct BlockRate {
  int l = 0;
  double initial_norm = 0.0;
  double rate = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  bool active = false;
  bool resolved = false;
  int samples = 0;
};

struct SmoothingCertificate {
  std::vector<BlockRate> blocks;
  double p = 2.0;
  /// Chemin-Lerner L~1_T B^{N/p+2}_{p,1} norm of q
  double l1_besov_budget = 0.0;
};

/// Fits the decay of ||Delta_l q(t)||_2 over each block's first e-folding and
/// compares it to 2 mu'(1) 4^l. Throws Degenerate when q vanishes, TooFewSamples
/// below three states.
SmoothingCertificate smoothing_certificate(const Trajectory& traj, const FluidModel& m, double p = 2.0);

struct BlockGrowth {
  int l = 0;
  double initial_norm = 0.0;
  double max_norm = 0.0;
  double ratio = 0.0;
  double fitted_rate = 0.0;
};

struct TransportContrast {
  std::vector<BlockGrowth> blocks;
  double max_ratio = 0.0;
  /// every active block stays within 2x its initial norm
  bool bounded = true;
};

/// Throws Degenerate when div v has no initial dyadic content.
TransportContrast transport_contrast_certificate(const Trajectory& traj);

}  // namespace bdns
