#include "bdns/constitutive.hpp"

#include <cmath>

namespace bdns {

namespace {

void require_positive(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::NonPositiveDensity, "density must be positive, got " + std::to_string(rho));
  }
}

}  // namespace

std::vector<ModelViolation> validate_model(const FluidModel& m) {
  std::vector<ModelViolation> out;
  if (m.dim != 2 && m.dim != 3) out.push_back({ErrorCode::BadDimension, "dim must be 2 or 3"});
  if (!(m.mu > 0.0) || !std::isfinite(m.mu)) out.push_back({ErrorCode::ModelInvalid, "mu must be positive"});
  if (!(m.gamma > 1.0) || !std::isfinite(m.gamma)) {
    out.push_back({ErrorCode::GammaNotAdmissible, "gamma must exceed 1"});
  }
  if (!(m.rho_bar > 0.0) || !std::isfinite(m.rho_bar)) {
    out.push_back({ErrorCode::ModelInvalid, "rho_bar must be positive"});
  }
  if (m.dim == 2 || m.dim == 3) {
    const double bound = 1.0 - 1.0 / m.dim;
    if (!(m.alpha > bound) || !std::isfinite(m.alpha)) {
      out.push_back({ErrorCode::AlphaBelowLame, "alpha must exceed 1 - 1/dim = " + std::to_string(bound)});
    }
  }
  if (out.empty()) {
    // Secondary guard: mu(rho) > 0 and lambda + 2 mu > 0 on a density sweep.
    for (int i = 0; i <= 200; ++i) {
      const double rho = 0.1 * std::pow(100.0, i / 200.0);
      const double mu = m.mu * std::pow(rho, m.alpha);
      const double lambda = 2.0 * m.mu * (m.alpha - 1.0) * std::pow(rho, m.alpha);
      if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0)) {
        out.push_back({ErrorCode::ModelInvalid, "lambda + 2 mu must stay positive"});
        break;
      }
    }
  }
  return out;
}

FluidModel make_model(double mu, double alpha, double gamma, double rho_bar, int dim) {
  FluidModel m{mu, alpha, gamma, rho_bar, dim};
  const auto v = validate_model(m);
  if (!v.empty()) throw Error(v.front().code, v.front().message);
  return m;
}

Viscosity viscosity(const FluidModel& m, double rho) {
  require_positive(rho);
  const double a = m.alpha;
  return {m.mu * std::pow(rho, a), m.mu * a * std::pow(rho, a - 1.0), m.mu * a * (a - 1.0) * std::pow(rho, a - 2.0)};
}

double lambda_of(const FluidModel& m, double rho) {
  require_positive(rho);
  return 2.0 * m.mu * (m.alpha - 1.0) * std::pow(rho, m.alpha);
}

double lambda_prime(const FluidModel& m, double rho) {
  require_positive(rho);
  return 2.0 * m.mu * (m.alpha - 1.0) * m.alpha * std::pow(rho, m.alpha - 1.0);
}

double phi_of(const FluidModel& m, double rho) {
  require_positive(rho);
  if (m.alpha == 1.0) return 2.0 * m.mu * std::log(rho);
  return 2.0 * m.mu * m.alpha / (m.alpha - 1.0) * (std::pow(rho, m.alpha - 1.0) - 1.0);
}

double phi_prime(const FluidModel& m, double rho) {
  require_positive(rho);
  return 2.0 * m.mu * m.alpha * std::pow(rho, m.alpha - 2.0);
}

double pressure_P(const FluidModel& m, double rho) {
  require_positive(rho);
  return std::pow(rho, m.gamma);
}

double pressure_prime(const FluidModel& m, double rho) {
  require_positive(rho);
  return m.gamma * std::pow(rho, m.gamma - 1.0);
}

double F_of(const FluidModel& m, double rho) {
  require_positive(rho);
  return m.gamma / (m.gamma - 1.0) * (std::pow(rho, m.gamma - 1.0) - 1.0);
}

double Pi_of(const FluidModel& m, double s) {
  require_positive(s);
  const double g1 = m.gamma - 1.0;
  const double ref = std::pow(m.rho_bar, g1);
  return s * ((std::pow(s, g1) - ref) / g1 - ref);
}

void require_density(const ScalarField& rho) {
  const double lo = rho.min();
  if (!(lo > kDensityFloor)) {
    throw Error(ErrorCode::VacuumApproach, "min density " + std::to_string(lo) + " at or below floor");
  }
}

namespace {

template <typename Fn>
ScalarField compose(const ScalarField& rho, Fn&& fn) {
  require_density(rho);
  return rho.map(fn);
}

}  // namespace

ScalarField mu_field(const FluidModel& m, const ScalarField& rho) {
  return compose(rho, [&](double r) { return m.mu * std::pow(r, m.alpha); });
}
ScalarField mu_prime_field(const FluidModel& m, const ScalarField& rho) {
  return compose(rho, [&](double r) { return m.mu * m.alpha * std::pow(r, m.alpha - 1.0); });
}
ScalarField mu_second_field(const FluidModel& m, const ScalarField& rho) {
  return compose(rho, [&](double r) { return m.mu * m.alpha * (m.alpha - 1.0) * std::pow(r, m.alpha - 2.0); });
}
ScalarField lambda_field(const FluidModel& m, const ScalarField& rho) {
  return compose(rho, [&](double r) { return lambda_of(m, r); });
}
ScalarField phi_field(const FluidModel& m, const ScalarField& rho) {
  return compose(rho, [&](double r) { return phi_of(m, r); });
}
ScalarField pressure_field(const FluidModel& m, const ScalarField& rho) {
  return compose(rho, [&](double r) { return pressure_P(m, r); });
}
ScalarField F_field(const FluidModel& m, const ScalarField& rho) {
  return compose(rho, [&](double r) { return F_of(m, r); });
}

VectorField grad_phi(const FluidModel& m, const ScalarField& rho) { return gradient(dealias(phi_field(m, rho))); }

}  // namespace bdns
