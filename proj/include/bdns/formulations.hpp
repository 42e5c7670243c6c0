#pragma once

// Right-hand sides of the three equivalent forms of the system: classical
// (rho, rho u), effective (rho, v) with v = u + grad phi(rho), and decomposed
// (q, div v, curl v) with q = rho - 1. Every quadratic product is dealiased and
// composed coefficients (mu(rho), F(rho), ...) are band-limited before use.

#include <array>
#include <vector>

#include "bdns/constitutive.hpp"
#include "bdns/grid.hpp"

namespace bdns {

struct ClassicalState {
  ScalarField rho;
  VectorField u;
};

struct EffectiveState {
  ScalarField q;
  ScalarField divv;
  CurlField curlv;
  std::vector<double> mean_v;

  const Grid& grid() const { return q.grid(); }
  ScalarField rho() const { return q + ScalarField::constant(q.grid(), 1.0); }
};

VectorField to_effective(const FluidModel& m, const ScalarField& rho, const VectorField& u);
VectorField from_effective(const FluidModel& m, const ScalarField& rho, const VectorField& v);

/// (q, div v, curl v, mean v) of an effective velocity.
EffectiveState decompose(const ScalarField& rho, const VectorField& v);

/// Inverse of decompose. Throws NonZeroMean when divv carries a mean and
/// IncompatibleCurl when curl of the result misses curlv by more than 1e-6 (relative).
VectorField reconstruct_v(const ScalarField& divv, const CurlField& curlv, const std::vector<double>& mean_v);

struct ClassicalRates {
  ScalarField drho_dt;
  VectorField dmomentum_dt;
};

ClassicalRates rhs_original(const FluidModel& m, const ClassicalState& state);

struct EffectiveRates {
  ScalarField drho_dt;
  VectorField dv_dt;
};

EffectiveRates rhs_effective(const FluidModel& m, const ScalarField& rho, const VectorField& v);

/// -1/2 sum_ij d_i phi(rho) d_j (curl v)_ij
ScalarField remainder_R(const FluidModel& m, const ScalarField& rho, const VectorField& v);
CurlField remainder_R1(const FluidModel& m, const ScalarField& rho, const VectorField& u, const VectorField& v);

struct DecomposedRates {
  ScalarField dq_dt;
  ScalarField ddivv_dt;
  CurlField dcurlv_dt;
  std::vector<double> dmean_v_dt;
};

DecomposedRates rhs_decomposed(const FluidModel& m, const EffectiveState& state);

struct IdentityReport {
  /// div(u.grad v), curl(u.grad v), curl((mu/rho) div curl v), curl(grad phi . curl v)
  std::array<double, 4> absolute{};
  std::array<double, 4> relative{};

  double max_relative() const;
};

IdentityReport identity_residuals(const FluidModel& m, const ScalarField& rho, const VectorField& u,
                                  const VectorField& v);

/// Relative L2 gap between the chain-rule image of rhs_original and rhs_effective.
double equivalence_residual(const FluidModel& m, const ClassicalState& state);

}  // namespace bdns
