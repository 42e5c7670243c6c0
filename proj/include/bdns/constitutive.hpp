#pragma once

// Power-law viscosity mu(rho) = mu * rho^alpha with the companion coefficient
// lambda(rho) = 2 rho mu'(rho) - 2 mu(rho), pressure P = rho^gamma, and the
// potentials phi (phi' = 2 mu'/rho), F (F' = P'/rho) and Pi.

#include <string>
#include <vector>

#include "bdns/error.hpp"
#include "bdns/grid.hpp"

namespace bdns {

/// Pointwise evaluations on fields below this density are a VacuumApproach error.
inline constexpr double kDensityFloor = 1e-6;

struct FluidModel {
  double mu = 1.0;
  double alpha = 1.0;
  double gamma = 2.0;
  double rho_bar = 1.0;
  int dim = 2;
};

struct ModelViolation {
  ErrorCode code;
  std::string message;
};

/// Collects every violated admissibility condition; empty when the model is valid.
std::vector<ModelViolation> validate_model(const FluidModel& model);
/// Throws the first violation's code.
FluidModel make_model(double mu, double alpha, double gamma, double rho_bar, int dim);

struct Viscosity {
  double value;
  double first;
  double second;
};

Viscosity viscosity(const FluidModel& m, double rho);
double lambda_of(const FluidModel& m, double rho);
double lambda_prime(const FluidModel& m, double rho);
double phi_of(const FluidModel& m, double rho);
double phi_prime(const FluidModel& m, double rho);
double pressure_P(const FluidModel& m, double rho);
double pressure_prime(const FluidModel& m, double rho);
double F_of(const FluidModel& m, double rho);
double Pi_of(const FluidModel& m, double s);

/// Throws VacuumApproach when min(rho) <= kDensityFloor.
void require_density(const ScalarField& rho);

// Pointwise compositions on fields (guarded by require_density).
ScalarField mu_field(const FluidModel& m, const ScalarField& rho);
ScalarField mu_prime_field(const FluidModel& m, const ScalarField& rho);
ScalarField mu_second_field(const FluidModel& m, const ScalarField& rho);
ScalarField lambda_field(const FluidModel& m, const ScalarField& rho);
ScalarField phi_field(const FluidModel& m, const ScalarField& rho);
ScalarField pressure_field(const FluidModel& m, const ScalarField& rho);
ScalarField F_field(const FluidModel& m, const ScalarField& rho);
/// gradient(phi(rho)) with phi(rho) band-limited by the two-thirds rule first.
VectorField grad_phi(const FluidModel& m, const ScalarField& rho);

}  // namespace bdns
