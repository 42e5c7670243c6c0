#pragma once

// Empirical-constant certificates for the heat, transport-diffusion and
// transport estimates. Each driver integrates the matching scalar linear
// problem with frozen coefficients, then compares the estimated norm (lhs)
// with the right-hand side evaluated at C = 1 (driver).

#include <functional>
#include <optional>
#include <string>

#include "bdns/grid.hpp"
#include "bdns/littlewood_paley.hpp"

namespace bdns {

enum class EstimateKind {
  /// d_t u - mu lap u = 0;  L~1_T B^{s+2}_{p,1}  vs  ||u0||_{B^s_{p,1}}
  Heat24,
  /// d_t v + u.grad v - mu(1+a) lap v = 0;  L~1 B^{s+2} + L~inf B^s  vs  e^V ||v0||_{B^s_{p,1}}
  TransportDiffusion25,
  /// d_t q + v.grad q - mu lap q = -(1+q) div v;  L~inf B^{N/p} of (Id - S_m) q
  TransportDiffusion26,
  /// d_t q + u.grad q = 0;  L~inf B^s_{p,r}  vs  e^U ||q0||_{B^s_{p,r}}
  Transport27,
};

std::string to_string(EstimateKind kind);
/// Throws BadValue for unknown names.
EstimateKind estimate_kind_from(const std::string& name);

struct EstimateInputs {
  ScalarField initial;
  /// Frozen advecting field; zero when absent.
  std::optional<VectorField> velocity;
  /// Frozen diffusion perturbation a (TransportDiffusion25 only).
  std::optional<ScalarField> coefficient;
  double mu = 1.0;
  double horizon = 0.1;
  int steps = 200;
  double s = 0.0;
  double p = 2.0;
  double r = 1.0;
  int cutoff_m = 4;
};

struct EstimateReport {
  EstimateKind kind = EstimateKind::Heat24;
  double lhs = 0.0;
  double driver = 0.0;
  double empirical_C = 0.0;
};

/// Throws Degenerate on zero initial data.
EstimateReport estimate_certificate(EstimateKind kind, const EstimateInputs& inputs);

/// Samples (including t = 0) of the ETD-RK2 integration of d_t q = -c|k|^2 q + N(q).
TimeSampledField integrate_scalar(const ScalarField& q0, double diffusion,
                                  const std::function<ScalarField(const ScalarField&)>& nonlinear, double horizon,
                                  int steps);

}  // namespace bdns
