#include "bdns/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdns/constitutive.hpp"

namespace bdns {

namespace {

double q_rate(const FluidModel& m) { return 2.0 * viscosity(m, 1.0).first; }
double curl_rate(const FluidModel& m) { return viscosity(m, 1.0).value; }

double phi1(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0;
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-2) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 + z * z * z * z / 720.0;
  return (std::expm1(z) - z) / (z * z);
}

// Spectral packing: fields[0] = q, fields[1] = div v, fields[2..] = curl entries.
struct Packed {
  std::vector<std::vector<Complex>> fields;
  std::vector<double> mean;
};

Packed pack(const EffectiveState& s) {
  Packed p;
  p.fields.push_back(s.q.spectrum());
  p.fields.push_back(s.divv.spectrum());
  for (const auto& e : s.curlv.upper()) p.fields.push_back(e.spectrum());
  p.mean = s.mean_v;
  return p;
}

EffectiveState unpack(const Grid& g, const Packed& p) {
  std::vector<ScalarField> upper;
  for (std::size_t e = 2; e < p.fields.size(); ++e) upper.push_back(ScalarField::from_spectrum(g, p.fields[e]));
  return {ScalarField::from_spectrum(g, p.fields[0]), ScalarField::from_spectrum(g, p.fields[1]),
          CurlField(g, std::move(upper)), p.mean};
}

Packed pack_rates(const DecomposedRates& r) {
  Packed p;
  p.fields.push_back(r.dq_dt.spectrum());
  p.fields.push_back(r.ddivv_dt.spectrum());
  for (const auto& e : r.dcurlv_dt.upper()) p.fields.push_back(e.spectrum());
  p.mean = r.dmean_v_dt;
  return p;
}

/// Per-slot linear symbol of each packed field.
struct Propagator {
  std::vector<std::vector<double>> L;
  std::vector<std::vector<double>> E;
  std::vector<std::vector<double>> P1;
  std::vector<std::vector<double>> P2;
};

Propagator make_propagator(const Grid& g, const FluidModel& m, double h, std::size_t field_count) {
  const double aq = q_rate(m);
  const double aw = curl_rate(m);
  Propagator prop;
  std::vector<double> lq(g.spectral_size()), lw(g.spectral_size()), zero(g.spectral_size(), 0.0);
  for (std::size_t s = 0; s < lq.size(); ++s) {
    lq[s] = -aq * g.k_squared(s);
    lw[s] = -aw * g.k_squared(s);
  }
  for (std::size_t f = 0; f < field_count; ++f) {
    const auto& L = f == 0 ? lq : (f == 1 ? zero : lw);
    std::vector<double> E(L.size()), P1(L.size()), P2(L.size());
    for (std::size_t s = 0; s < L.size(); ++s) {
      const double z = h * L[s];
      E[s] = std::exp(z);
      P1[s] = phi1(z);
      P2[s] = phi2(z);
    }
    prop.L.push_back(L);
    prop.E.push_back(std::move(E));
    prop.P1.push_back(std::move(P1));
    prop.P2.push_back(std::move(P2));
  }
  return prop;
}

/// N(X) = rates(X) - L X
Packed nonlinear_part(const EffectiveState& state, const Packed& x, const FluidModel& m, const Propagator& prop) {
  Packed r = pack_rates(rhs_decomposed(m, state));
  for (std::size_t f = 0; f < r.fields.size(); ++f) {
    for (std::size_t s = 0; s < r.fields[f].size(); ++s) r.fields[f][s] -= prop.L[f][s] * x.fields[f][s];
  }
  return r;
}

double min_density(const EffectiveState& s) { return 1.0 + s.q.min(); }

void guard_vacuum(const EffectiveState& s) {
  if (!(min_density(s) > kDensityFloor)) {
    throw Error(ErrorCode::VacuumApproach, "min density " + std::to_string(min_density(s)) + " at or below floor");
  }
}

/// dt * (advective + acoustic speed) / h
double cfl_number(const EffectiveState& state, const FluidModel& m, double dt) {
  const Grid& g = state.grid();
  const ScalarField rho = state.rho();
  const VectorField v = reconstruct_v(state.divv, state.curlv, state.mean_v);
  const VectorField gphi = grad_phi(m, rho);
  const VectorField u = v - gphi;
  const VectorField w = u - 0.5 * gphi;
  const ScalarField su = u.magnitude();
  const ScalarField sw = w.magnitude();
  double speed = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = std::sqrt(pressure_prime(m, rho[i]));
    speed = std::max(speed, std::max(su[i], sw[i]) + c);
  }
  return dt * speed / g.spacing();
}

double diffusion_excess(const EffectiveState& state, const FluidModel& m) {
  const ScalarField rho = state.rho();
  const double aq = q_rate(m);
  const double aw = curl_rate(m);
  double excess = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const auto visc = viscosity(m, rho[i]);
    excess = std::max(excess, std::abs(2.0 * visc.first - aq));
    excess = std::max(excess, std::abs(visc.value / rho[i] - aw));
  }
  return excess;
}

double k_max_squared(const Grid& g) {
  const double k = g.dealias_limit() * g.wavenumber_unit();
  return g.dim() * k * k;
}

}  // namespace

HeatSolution heat_propagate(const ScalarField& q0, const CurlField& curlv0, const FluidModel& m, double t) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "propagation time must be nonnegative");
  const Grid& g = q0.grid();
  const double aq = q_rate(m);
  const double aw = curl_rate(m);
  ScalarField q = apply_multiplier(q0, [&](std::size_t s) { return std::exp(-aq * g.k_squared(s) * t); });
  std::vector<ScalarField> upper;
  for (const auto& e : curlv0.upper()) {
    upper.push_back(apply_multiplier(e, [&](std::size_t s) { return std::exp(-aw * g.k_squared(s) * t); }));
  }
  return {std::move(q), CurlField(g, std::move(upper))};
}

HybridMode linear_hybrid_oracle(Complex q0_hat, Complex d0_hat, double k_sq, double mu, double t,
                                double pressure_slope) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "propagation time must be nonnegative");
  // A = [[tau, -1], [c2 k^2, 0]]; exp(At) = e^{tau t/2}(cosh(st) I + sinh(st)/s (A - tau/2 I)),
  // s^2 = tau^2/4 - det A.
  const double tau = -2.0 * mu * k_sq;
  const double det = pressure_slope * k_sq;
  const Complex s = std::sqrt(Complex(tau * tau / 4.0 - det, 0.0));
  const Complex ep = std::exp((tau / 2.0 + s) * t);
  const Complex em = std::exp((tau / 2.0 - s) * t);
  const Complex C = 0.5 * (ep + em);
  Complex S;
  if (std::abs(s * t) < 1e-6) {
    S = std::exp(tau * t / 2.0) * t * (1.0 + s * s * t * t / 6.0);
  } else {
    S = (ep - em) / (2.0 * s);
  }
  const double c = C.real();
  const double sh = S.real();
  const double m00 = c + sh * (tau / 2.0);
  const double m01 = -sh;
  const double m10 = sh * det;
  const double m11 = c - sh * (tau / 2.0);
  return {m00 * q0_hat + m01 * d0_hat, m10 * q0_hat + m11 * d0_hat};
}

double max_stable_dt(const EffectiveState& state, const FluidModel& m, double cfl_target) {
  const double per_unit = cfl_number(state, m, 1.0);
  double dt = per_unit > 0.0 ? cfl_target / per_unit : std::numeric_limits<double>::infinity();
  const double excess = diffusion_excess(state, m);
  if (excess > 0.0) dt = std::min(dt, 0.5 / (excess * k_max_squared(state.grid())));
  return dt;
}

EffectiveState imex_step(const EffectiveState& state, const FluidModel& m, double dt, double cfl_target,
                         const StepOptions& options) {
  if (!(dt > 0.0)) throw Error(ErrorCode::BadValue, "dt must be positive");
  const Grid& g = state.grid();
  guard_vacuum(state);

  const Packed x0 = pack(state);
  const Propagator prop = make_propagator(g, m, dt, x0.fields.size());

  if (options.sources_off) {
    Packed x1 = x0;
    for (std::size_t f = 0; f < x1.fields.size(); ++f) {
      for (std::size_t s = 0; s < x1.fields[f].size(); ++s) x1.fields[f][s] *= prop.E[f][s];
    }
    return unpack(g, x1);
  }

  const double limit = max_stable_dt(state, m, cfl_target);
  if (dt > limit * (1.0 + 1e-12)) {
    throw Error(ErrorCode::CflViolation,
                "dt " + std::to_string(dt) + " exceeds stable limit " + std::to_string(limit));
  }

  const Packed n0 = nonlinear_part(state, x0, m, prop);
  Packed a = x0;
  for (std::size_t f = 0; f < a.fields.size(); ++f) {
    for (std::size_t s = 0; s < a.fields[f].size(); ++s) {
      a.fields[f][s] = prop.E[f][s] * x0.fields[f][s] + dt * prop.P1[f][s] * n0.fields[f][s];
    }
  }
  for (std::size_t j = 0; j < a.mean.size(); ++j) a.mean[j] = x0.mean[j] + dt * n0.mean[j];
  const EffectiveState stage = unpack(g, a);
  guard_vacuum(stage);

  const Packed na = nonlinear_part(stage, a, m, prop);
  Packed x1 = a;
  for (std::size_t f = 0; f < x1.fields.size(); ++f) {
    for (std::size_t s = 0; s < x1.fields[f].size(); ++s) {
      x1.fields[f][s] += dt * prop.P2[f][s] * (na.fields[f][s] - n0.fields[f][s]);
    }
  }
  for (std::size_t j = 0; j < x1.mean.size(); ++j) x1.mean[j] += 0.5 * dt * (na.mean[j] - n0.mean[j]);
  EffectiveState next = unpack(g, x1);
  guard_vacuum(next);
  return next;
}

Trajectory run(const EffectiveState& initial, const FluidModel& m, const StepControl& control,
               const StepOptions& options, const StepObserver& observer) {
  if (!(control.dt > 0.0)) throw Error(ErrorCode::BadValue, "dt must be positive");
  if (!(control.t_end > 0.0)) throw Error(ErrorCode::BadValue, "t_end must be positive");
  if (!(control.cfl_target > 0.0 && control.cfl_target <= 1.0)) {
    throw Error(ErrorCode::BadValue, "cfl_target must lie in (0, 1]");
  }
  if (control.snapshot_every < 1) throw Error(ErrorCode::BadValue, "snapshot_every must be at least 1");

  Trajectory traj;
  traj.dt = control.dt;
  try {
    guard_vacuum(initial);
  } catch (const Error& e) {
    traj.abort_code = e.code();
    traj.abort_message = e.what();
    return traj;
  }

  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  if (observer) observer(0.0, initial);

  const auto steps = static_cast<long>(std::ceil(control.t_end / control.dt - 1e-9));
  EffectiveState state = initial;
  double t = 0.0;
  for (long n = 1; n <= steps; ++n) {
    const double t_next = n == steps ? control.t_end : static_cast<double>(n) * control.dt;
    const double h = t_next - t;
    StepStat stat;
    stat.time = t_next;
    stat.dt = h;
    try {
      if (!options.sources_off) stat.cfl = cfl_number(state, m, h);
      state = imex_step(state, m, h, control.cfl_target, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::VacuumApproach && e.code() != ErrorCode::CflViolation) throw;
      traj.abort_code = e.code();
      traj.abort_message = e.what();
      traj.step_stats.push_back(stat);
      return traj;
    }
    t = t_next;
    stat.min_rho = min_density(state);
    traj.step_stats.push_back(stat);
    if (observer) observer(t, state);
    if (n % control.snapshot_every == 0 || n == steps) {
      traj.times.push_back(t);
      traj.states.push_back(state);
    }
  }
  traj.completed = true;
  return traj;
}

}  // namespace bdns
