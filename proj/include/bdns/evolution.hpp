#pragma once

// Time integration of the decomposed system. The frozen diffusion
// 2 mu'(1) lap q and mu(1) lap curl v is integrated exactly per mode; the rest
// is explicit (second-order exponential time differencing, ETD-RK2).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdns/error.hpp"
#include "bdns/formulations.hpp"

namespace bdns {

struct StepControl {
  double dt = 1e-3;
  double cfl_target = 0.5;
  double t_end = 1.0;
  int snapshot_every = 1;
  /// Low-frequency cutoff index used by the transport-diffusion certificate.
  int cutoff_m = 4;
};

struct StepOptions {
  /// Drop every explicit term: the step becomes the exact frozen heat propagator.
  bool sources_off = false;
};

struct StepStat {
  double time = 0.0;
  double dt = 0.0;
  double min_rho = 0.0;
  double cfl = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<EffectiveState> states;
  std::vector<StepStat> step_stats;
  double dt = 0.0;
  bool completed = false;
  std::optional<ErrorCode> abort_code;
  std::string abort_message;
};

struct HeatSolution {
  ScalarField q;
  CurlField curlv;
};

/// Mode k of q scaled by exp(-2 mu'(1)|k|^2 t), of curl v by exp(-mu(1)|k|^2 t).
/// Throws NegativeTime for t < 0.
HeatSolution heat_propagate(const ScalarField& q0, const CurlField& curlv0, const FluidModel& m, double t);

struct HybridMode {
  Complex q;
  Complex d;
};

/// Exact solution of q' = -2 mu k^2 q - d, d' = c^2 k^2 q (c^2 = pressure_slope).
HybridMode linear_hybrid_oracle(Complex q0_hat, Complex d0_hat, double k_sq, double mu, double t,
                                double pressure_slope = 1.0);

/// Largest dt allowed by the advective/acoustic and diffusion-excess limits.
double max_stable_dt(const EffectiveState& state, const FluidModel& m, double cfl_target);

/// Throws VacuumApproach or CflViolation.
EffectiveState imex_step(const EffectiveState& state, const FluidModel& m, double dt, double cfl_target = 1.0,
                         const StepOptions& options = {});

using StepObserver = std::function<void(double time, const EffectiveState& state)>;

/// Steps to t_end with fixed dt (the last step is shortened to land on t_end).
/// Physics aborts end the run and are recorded; the partial trajectory is returned.
Trajectory run(const EffectiveState& initial, const FluidModel& m, const StepControl& control,
               const StepOptions& options = {}, const StepObserver& observer = {});

}  // namespace bdns
