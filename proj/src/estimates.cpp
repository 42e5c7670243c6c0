#include "bdns/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "bdns/error.hpp"

namespace bdns {

std::string to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::Heat24: return "heat24";
    case EstimateKind::TransportDiffusion25: return "tdiff25";
    case EstimateKind::TransportDiffusion26: return "tdiff26";
    case EstimateKind::Transport27: return "transport27";
  }
  return "unknown";
}

EstimateKind estimate_kind_from(const std::string& name) {
  for (auto k : {EstimateKind::Heat24, EstimateKind::TransportDiffusion25, EstimateKind::TransportDiffusion26,
                 EstimateKind::Transport27}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::BadValue, "unknown estimate kind '" + name + "'");
}

TimeSampledField integrate_scalar(const ScalarField& q0, double diffusion,
                                  const std::function<ScalarField(const ScalarField&)>& nonlinear, double horizon,
                                  int steps) {
  if (steps < 1 || !(horizon > 0.0)) throw Error(ErrorCode::BadValue, "need a positive horizon and step count");
  const Grid& g = q0.grid();
  const double h = horizon / steps;
  const std::size_t n = g.spectral_size();
  std::vector<double> E(n), P1(n), P2(n), L(n);
  for (std::size_t s = 0; s < n; ++s) {
    L[s] = -diffusion * g.k_squared(s);
    const double z = h * L[s];
    E[s] = std::exp(z);
    P1[s] = std::abs(z) < 1e-5 ? 1.0 + z / 2.0 : std::expm1(z) / z;
    P2[s] = std::abs(z) < 1e-2 ? 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 : (std::expm1(z) - z) / (z * z);
  }

  auto N = [&](const std::vector<Complex>& x) {
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    if (!nonlinear) return out;
    out = nonlinear(ScalarField::from_spectrum(g, x)).spectrum();
    return out;
  };

  TimeSampledField hist;
  std::vector<Complex> x = q0.spectrum();
  hist.append(0.0, ScalarField::from_spectrum(g, x));
  for (int step = 1; step <= steps; ++step) {
    const auto n0 = N(x);
    std::vector<Complex> a(n);
    for (std::size_t s = 0; s < n; ++s) a[s] = E[s] * x[s] + h * P1[s] * n0[s];
    const auto na = N(a);
    for (std::size_t s = 0; s < n; ++s) x[s] = a[s] + h * P2[s] * (na[s] - n0[s]);
    hist.append(step == steps ? horizon : step * h, ScalarField::from_spectrum(g, x));
  }
  return hist;
}

namespace {

ScalarField advect(const VectorField& u, const ScalarField& f) {
  const VectorField gf = gradient(f);
  ScalarField acc = ScalarField::zeros(f.grid());
  for (int k = 0; k < u.dim(); ++k) acc += u[k] * gf[k];
  return dealias(acc);
}

/// Components d_j u_i of the velocity gradient.
std::vector<ScalarField> velocity_gradient(const VectorField& u) {
  std::vector<ScalarField> out;
  for (int i = 0; i < u.dim(); ++i) {
    const VectorField gi = gradient(u[i]);
    for (int j = 0; j < u.dim(); ++j) out.push_back(gi[j]);
  }
  return out;
}

TimeSampledField map_history(const TimeSampledField& h, const std::function<ScalarField(const ScalarField&)>& fn) {
  TimeSampledField out;
  for (std::size_t i = 0; i < h.sample_count(); ++i) out.append(h.times()[i], fn(h.sample(i).front()));
  return out;
}

}  // namespace

EstimateReport estimate_certificate(EstimateKind kind, const EstimateInputs& in) {
  const ScalarField& q0 = in.initial;
  if (q0.max_abs() < 1e-14) throw Error(ErrorCode::Degenerate, "zero initial data");
  const Grid& g = q0.grid();
  const CutoffFamily cutoffs(g);
  const VectorField u = in.velocity ? *in.velocity : VectorField::zeros(g);
  const double dim = g.dim();
  const bool moving = std::any_of(u.components().begin(), u.components().end(),
                                  [](const ScalarField& c) { return c.max_abs() > 0.0; });

  EstimateReport rep;
  rep.kind = kind;
  switch (kind) {
    case EstimateKind::Heat24: {
      const auto hist = integrate_scalar(q0, in.mu, {}, in.horizon, in.steps);
      rep.lhs = chemin_lerner_norm(cutoffs, hist, 1.0, {in.s + 2.0, in.p, 1.0});
      rep.driver = besov_norm(cutoffs, hist.sample(0), {in.s, in.p, 1.0});
      break;
    }
    case EstimateKind::TransportDiffusion25: {
      const ScalarField a = in.coefficient ? *in.coefficient : ScalarField::zeros(g);
      const double mu = in.mu;
      auto rhs = [&](const ScalarField& v) {
        return -advect(u, v) + mu * dealiased_product(a, laplacian(v));
      };
      const auto hist = integrate_scalar(q0, in.mu, rhs, in.horizon, in.steps);
      rep.lhs = chemin_lerner_norm(cutoffs, hist, 1.0, {in.s + 2.0, in.p, 1.0}) +
                chemin_lerner_norm(cutoffs, hist, kInfinity, {in.s, in.p, 1.0});
      const BesovSpec reg{dim / in.p + 1.0, in.p, 1.0};
      const double a_norm = besov_norm(cutoffs, a, reg);
      const double V = in.horizon * (besov_norm(cutoffs, u.components(), reg) + a_norm * a_norm);
      rep.driver = std::exp(V) * besov_norm(cutoffs, hist.sample(0), {in.s, in.p, 1.0});
      break;
    }
    case EstimateKind::TransportDiffusion26: {
      const ScalarField divv = divergence(u);
      auto rhs = [&](const ScalarField& q) {
        return -advect(u, q) - divv - dealiased_product(q, divv);
      };
      const auto hist = integrate_scalar(q0, in.mu, rhs, in.horizon, in.steps);
      const int m = in.cutoff_m;
      const auto high = map_history(hist, [&](const ScalarField& q) { return high_part(cutoffs, q, m); });
      const BesovSpec crit{dim / in.p, in.p, 1.0};
      rep.lhs = chemin_lerner_norm(cutoffs, high, kInfinity, crit);
      const double V = in.horizon * besov_norm(cutoffs, u.components(), {dim / in.p + 1.0, in.p, 1.0});
      const ScalarField& first = hist.sample(0).front();
      rep.driver = besov_norm(cutoffs, high_part(cutoffs, first, m), crit) +
                   std::expm1(V) * (1.0 + besov_norm(cutoffs, first, crit));
      break;
    }
    case EstimateKind::Transport27: {
      std::function<ScalarField(const ScalarField&)> rhs;
      if (moving) rhs = [&](const ScalarField& q) { return -advect(u, q); };
      const auto hist = integrate_scalar(q0, 0.0, rhs, in.horizon, in.steps);
      const BesovSpec spec{in.s, in.p, in.r};
      rep.lhs = chemin_lerner_norm(cutoffs, hist, kInfinity, spec);
      const auto du = velocity_gradient(u);
      const double U = in.horizon * (besov_norm(cutoffs, du, {dim / in.p, in.p, kInfinity}) + lp_norm(du, kInfinity));
      rep.driver = std::exp(U) * besov_norm(cutoffs, hist.sample(0), spec);
      break;
    }
  }
  if (!(rep.driver > 0.0)) throw Error(ErrorCode::Degenerate, "estimate driver vanishes");
  rep.empirical_C = rep.lhs / rep.driver;
  return rep;
}

}  // namespace bdns
