#include "bdns/formulations.hpp"

#include <algorithm>
#include <cmath>

namespace bdns {

namespace {

ScalarField one(const Grid& g) { return ScalarField::constant(g, 1.0); }

/// dealias(sum_k u_k d_k f) given grad f.
ScalarField advect(const VectorField& u, const VectorField& grad_f) {
  ScalarField acc = ScalarField::zeros(u.grid());
  for (int k = 0; k < u.dim(); ++k) acc += u[k] * grad_f[k];
  return dealias(acc);
}

/// Jacobian J[i][k] = d_i w_k.
std::vector<VectorField> jacobian(const VectorField& w) {
  std::vector<VectorField> out;
  for (int k = 0; k < w.dim(); ++k) out.push_back(gradient(w[k]));
  // out[k][i] = d_i w_k; transpose to rows indexed by i.
  std::vector<VectorField> rows;
  for (int i = 0; i < w.dim(); ++i) {
    std::vector<ScalarField> c;
    for (int k = 0; k < w.dim(); ++k) c.push_back(out[static_cast<std::size_t>(k)][i]);
    rows.push_back(VectorField(std::move(c)));
  }
  return rows;
}

double dj(const std::vector<VectorField>& jac, int i, int k, std::size_t p) {
  return jac[static_cast<std::size_t>(i)][k][p];
}

/// Pointwise sum_k d_i u_k d_k v_j, dealiased.
ScalarField grad_contract(const std::vector<VectorField>& ju, const std::vector<VectorField>& jv, int i, int j) {
  const Grid& g = ju.front().grid();
  const int dim = g.dim();
  std::vector<double> out(g.size(), 0.0);
  for (int k = 0; k < dim; ++k) {
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += dj(ju, i, k, p) * dj(jv, k, j, p);
  }
  return dealias(ScalarField(g, std::move(out)));
}

template <typename Entry>
CurlField assemble_curl(const Grid& g, Entry&& entry) {
  std::vector<ScalarField> upper;
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = i + 1; j < g.dim(); ++j) upper.push_back(entry(i, j));
  }
  return CurlField(g, std::move(upper));
}

double l2_curl(const CurlField& w) { return l2_norm(w.upper()); }
double l2_vec(const VectorField& w) { return l2_norm(w.components()); }

double relative_of(double diff, std::initializer_list<double> scales) {
  const double s = std::max(scales);
  if (s < 1e-300) return diff < 1e-300 ? 0.0 : 1.0;
  return diff / s;
}

/// Band-limited mu(rho)/rho and lambda(rho)/rho^2.
ScalarField mu_over_rho(const FluidModel& m, const ScalarField& rho) {
  return dealias(rho.map([&](double r) { return m.mu * std::pow(r, m.alpha - 1.0); }));
}
ScalarField lambda_over_rho2(const FluidModel& m, const ScalarField& rho) {
  return dealias(rho.map([&](double r) { return 2.0 * m.mu * (m.alpha - 1.0) * std::pow(r, m.alpha - 2.0); }));
}

}  // namespace

VectorField to_effective(const FluidModel& m, const ScalarField& rho, const VectorField& u) {
  return u + grad_phi(m, rho);
}

VectorField from_effective(const FluidModel& m, const ScalarField& rho, const VectorField& v) {
  return v - grad_phi(m, rho);
}

EffectiveState decompose(const ScalarField& rho, const VectorField& v) {
  return {rho - one(rho.grid()), divergence(v), curl_matrix(v), v.mean()};
}

VectorField reconstruct_v(const ScalarField& divv, const CurlField& curlv, const std::vector<double>& mean_v) {
  const Grid& g = divv.grid();
  if (std::abs(divv.mean()) > 1e-12 * divv.max_abs()) {
    throw Error(ErrorCode::NonZeroMean, "div v must be mean-free");
  }
  if (mean_v.size() != static_cast<std::size_t>(g.dim())) {
    throw Error(ErrorCode::GridMismatch, "mean_v needs one entry per axis");
  }
  const VectorField gd = gradient(divv);
  const VectorField dc = div_of_curl(curlv);
  std::vector<ScalarField> comps;
  for (int j = 0; j < g.dim(); ++j) {
    ScalarField c = inverse_laplacian(gd[j] + dc[j]);
    c += ScalarField::constant(g, mean_v[static_cast<std::size_t>(j)]);
    comps.push_back(std::move(c));
  }
  VectorField v(std::move(comps));

  const double scale = l2_curl(curlv);
  const double miss = l2_curl(curl_matrix(v) - curlv);
  if (miss > 1e-6 * std::max(scale, 1e-300) && miss > 1e-14) {
    throw Error(ErrorCode::IncompatibleCurl, "curl data is not the curl of a vector field");
  }
  return v;
}

ClassicalRates rhs_original(const FluidModel& m, const ClassicalState& state) {
  const ScalarField& rho = state.rho;
  const VectorField& u = state.u;
  const Grid& g = rho.grid();
  const int dim = g.dim();
  require_density(rho);

  std::vector<ScalarField> mom;
  for (int j = 0; j < dim; ++j) mom.push_back(dealiased_product(rho, u[j]));
  const VectorField momentum(std::move(mom));
  ScalarField drho = -divergence(momentum);

  const ScalarField mu = dealias(mu_field(m, rho));
  const ScalarField lam = dealias(lambda_field(m, rho));
  const ScalarField pres = dealias(pressure_field(m, rho));
  const auto ju = jacobian(u);
  const ScalarField divu = divergence(u);
  const ScalarField lam_div = dealiased_product(lam, divu);

  std::vector<ScalarField> dm;
  for (int j = 0; j < dim; ++j) {
    ScalarField acc = ScalarField::zeros(g);
    for (int i = 0; i < dim; ++i) {
      const ScalarField flux = dealiased_product(momentum[i], u[j]);
      const ScalarField sym = 0.5 * (ju[static_cast<std::size_t>(i)][j] + ju[static_cast<std::size_t>(j)][i]);
      const ScalarField visc = dealiased_product(2.0 * mu, sym);
      acc += partial(visc - flux, i);
    }
    acc += partial(lam_div - pres, j);
    dm.push_back(std::move(acc));
  }
  return {std::move(drho), VectorField(std::move(dm))};
}

EffectiveRates rhs_effective(const FluidModel& m, const ScalarField& rho, const VectorField& v) {
  const Grid& g = rho.grid();
  const int dim = g.dim();
  require_density(rho);

  const VectorField gphi = grad_phi(m, rho);
  const VectorField u = v - gphi;
  const ScalarField mu = dealias(mu_field(m, rho));

  std::vector<ScalarField> flux;
  for (int j = 0; j < dim; ++j) flux.push_back(dealiased_product(rho, v[j]));
  ScalarField drho = 2.0 * laplacian(mu) - divergence(VectorField(std::move(flux)));

  const CurlField omega = curl_matrix(v);
  const VectorField dcv = div_of_curl(omega);
  const ScalarField c = mu_over_rho(m, rho);
  const ScalarField F = dealias(F_field(m, rho));

  std::vector<ScalarField> dv;
  for (int j = 0; j < dim; ++j) {
    ScalarField acc = -advect(u, gradient(v[j]));
    acc += dealiased_product(c, dcv[j]);
    ScalarField phi_w = ScalarField::zeros(g);
    for (int i = 0; i < dim; ++i) phi_w += gphi[i] * omega.at(i, j);
    acc += 0.5 * dealias(phi_w);
    acc -= partial(F, j);
    dv.push_back(std::move(acc));
  }
  return {std::move(drho), VectorField(std::move(dv))};
}

ScalarField remainder_R(const FluidModel& m, const ScalarField& rho, const VectorField& v) {
  const Grid& g = rho.grid();
  require_density(rho);
  const VectorField gphi = grad_phi(m, rho);
  const CurlField omega = curl_matrix(v);
  ScalarField acc = ScalarField::zeros(g);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      if (i != j) acc += gphi[i] * partial(omega.at(i, j), j);
    }
  }
  return -0.5 * dealias(acc);
}

namespace {

CurlField remainder_R1_impl(const FluidModel& m, const ScalarField& rho, const VectorField& u, const VectorField& v,
                            const ScalarField& phi_bl, const CurlField& omega, const VectorField& dcv) {
  const Grid& g = rho.grid();
  const int dim = g.dim();
  const auto ju = jacobian(u);
  const auto jv = jacobian(v);
  const VectorField grho = gradient(rho);
  const ScalarField l2 = lambda_over_rho2(m, rho);
  return assemble_curl(g, [&](int i, int j) {
    ScalarField e = grad_contract(ju, jv, i, j) - grad_contract(ju, jv, j, i);
    const ScalarField cross = dealias(grho[i] * dcv[j] - grho[j] * dcv[i]);
    e -= 0.5 * dealiased_product(l2, cross);
    ScalarField hess = ScalarField::zeros(g);
    for (int k = 0; k < dim; ++k) {
      hess += partial2(phi_bl, k, i) * omega.at(k, j) - partial2(phi_bl, k, j) * omega.at(k, i);
    }
    e -= 0.5 * dealias(hess);
    return e;
  });
}

}  // namespace

CurlField remainder_R1(const FluidModel& m, const ScalarField& rho, const VectorField& u, const VectorField& v) {
  require_density(rho);
  const ScalarField phi_bl = dealias(phi_field(m, rho));
  const CurlField omega = curl_matrix(v);
  return remainder_R1_impl(m, rho, u, v, phi_bl, omega, div_of_curl(omega));
}

DecomposedRates rhs_decomposed(const FluidModel& m, const EffectiveState& state) {
  const Grid& g = state.grid();
  const int dim = g.dim();
  const ScalarField rho = state.rho();
  require_density(rho);

  const VectorField v = reconstruct_v(state.divv, state.curlv, state.mean_v);
  const ScalarField phi_bl = dealias(phi_field(m, rho));
  const VectorField gphi = gradient(phi_bl);
  const VectorField u = v - gphi;
  const VectorField gq = gradient(state.q);
  const CurlField& omega = state.curlv;
  const VectorField dcv = div_of_curl(omega);

  // q: 2 mu'(rho) lap q + 2 mu''(rho) |grad q|^2 - div(q v) - div v
  ScalarField grad_sq = ScalarField::zeros(g);
  for (int k = 0; k < dim; ++k) grad_sq += gq[k] * gq[k];
  ScalarField diffusion = 2.0 * dealiased_product(dealias(mu_prime_field(m, rho)), laplacian(state.q));
  diffusion += 2.0 * dealiased_product(dealias(mu_second_field(m, rho)), dealias(grad_sq));
  // A Laplacian of mu(rho) in disguise; its mean is zero.
  diffusion = remove_mean(diffusion);
  std::vector<ScalarField> qv;
  for (int j = 0; j < dim; ++j) qv.push_back(dealiased_product(state.q, v[j]));
  ScalarField dq = diffusion - divergence(VectorField(std::move(qv))) - state.divv;

  // div v
  const auto ju = jacobian(u);
  const auto jv = jacobian(v);
  ScalarField dd = -advect(u, gradient(state.divv));
  ScalarField gradv_gradu = ScalarField::zeros(g);
  for (int j = 0; j < dim; ++j) gradv_gradu += grad_contract(ju, jv, j, j);
  dd -= gradv_gradu;
  ScalarField grho_dcv = ScalarField::zeros(g);
  for (int j = 0; j < dim; ++j) grho_dcv += gq[j] * dcv[j];
  dd += 0.5 * dealiased_product(lambda_over_rho2(m, rho), dealias(grho_dcv));
  ScalarField R = ScalarField::zeros(g);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i != j) R += gphi[i] * partial(omega.at(i, j), j);
    }
  }
  R = -0.5 * dealias(R);
  dd -= R;
  dd -= laplacian(dealias(F_field(m, rho)));
  dd = remove_mean(dd);

  // curl v
  const ScalarField c = mu_over_rho(m, rho);
  const CurlField R1 = remainder_R1_impl(m, rho, u, v, phi_bl, omega, dcv);
  const CurlField dw = assemble_curl(g, [&](int i, int j) {
    const ScalarField w = omega.at(i, j);
    const VectorField gw = gradient(w);
    ScalarField e = -advect(u, gw) + 0.5 * advect(gphi, gw);
    e += dealiased_product(c, laplacian(w));
    e -= R1.at(i, j);
    return remove_mean(e);
  });

  // mean of v: spatial average of the v equation
  std::vector<double> dmean(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    ScalarField acc = -advect(u, gradient(v[j]));
    acc += dealiased_product(c, dcv[j]);
    ScalarField phi_w = ScalarField::zeros(g);
    for (int i = 0; i < dim; ++i) phi_w += gphi[i] * omega.at(i, j);
    acc += 0.5 * phi_w;
    dmean[static_cast<std::size_t>(j)] = acc.mean();
  }

  return {std::move(dq), std::move(dd), dw, std::move(dmean)};
}

double IdentityReport::max_relative() const { return *std::max_element(relative.begin(), relative.end()); }

IdentityReport identity_residuals(const FluidModel& m, const ScalarField& rho, const VectorField& u,
                                  const VectorField& v) {
  const Grid& g = rho.grid();
  const int dim = g.dim();
  require_density(rho);
  IdentityReport rep;

  const auto ju = jacobian(u);
  const auto jv = jacobian(v);
  const CurlField omega = curl_matrix(v);
  const VectorField dcv = div_of_curl(omega);

  // u . grad v
  std::vector<ScalarField> adv;
  for (int j = 0; j < dim; ++j) adv.push_back(advect(u, gradient(v[j])));
  const VectorField A(std::move(adv));

  // (a) div(u.grad v) = u.grad div v + grad v : grad u^T
  {
    const ScalarField lhs = divergence(A);
    const ScalarField r1 = advect(u, gradient(divergence(v)));
    ScalarField r2 = ScalarField::zeros(g);
    for (int j = 0; j < dim; ++j) r2 += grad_contract(ju, jv, j, j);
    rep.absolute[0] = l2_norm(lhs - r1 - r2);
    rep.relative[0] = relative_of(rep.absolute[0], {l2_norm(lhs), l2_norm(r1), l2_norm(r2)});
  }
  // (b) curl(u.grad v)_ij = u.grad (curl v)_ij + sum_k (d_i u_k d_k v_j - d_j u_k d_k v_i)
  {
    const CurlField lhs = curl_matrix(A);
    const CurlField r1 = assemble_curl(g, [&](int i, int j) { return advect(u, gradient(omega.at(i, j))); });
    const CurlField r2 =
        assemble_curl(g, [&](int i, int j) { return grad_contract(ju, jv, i, j) - grad_contract(ju, jv, j, i); });
    rep.absolute[1] = l2_curl(lhs - r1 - r2);
    rep.relative[1] = relative_of(rep.absolute[1], {l2_curl(lhs), l2_curl(r1), l2_curl(r2)});
  }
  // (c) curl((mu/rho) div curl v)_ij = (mu/rho) lap (curl v)_ij
  //       + 1/2 (lambda/rho^2)(d_i rho (div curl v)_j - d_j rho (div curl v)_i)
  {
    const ScalarField c = mu_over_rho(m, rho);
    std::vector<ScalarField> bc;
    for (int j = 0; j < dim; ++j) bc.push_back(dealiased_product(c, dcv[j]));
    const CurlField lhs = curl_matrix(VectorField(std::move(bc)));
    const CurlField r1 = assemble_curl(g, [&](int i, int j) { return dealiased_product(c, laplacian(omega.at(i, j))); });
    const VectorField grho = gradient(rho);
    const ScalarField l2 = lambda_over_rho2(m, rho);
    const CurlField r2 = assemble_curl(g, [&](int i, int j) {
      return 0.5 * dealiased_product(l2, dealias(grho[i] * dcv[j] - grho[j] * dcv[i]));
    });
    rep.absolute[2] = l2_curl(lhs - r1 - r2);
    rep.relative[2] = relative_of(rep.absolute[2], {l2_curl(lhs), l2_curl(r1), l2_curl(r2)});
  }
  // (d) curl(grad phi . curl v)_ij = grad phi . grad (curl v)_ij
  //       + sum_k (d_ki phi (curl v)_kj - d_kj phi (curl v)_ki)
  {
    const ScalarField phi_bl = dealias(phi_field(m, rho));
    const VectorField gphi = gradient(phi_bl);
    std::vector<ScalarField> cc;
    for (int j = 0; j < dim; ++j) {
      ScalarField acc = ScalarField::zeros(g);
      for (int k = 0; k < dim; ++k) acc += gphi[k] * omega.at(k, j);
      cc.push_back(dealias(acc));
    }
    const CurlField lhs = curl_matrix(VectorField(std::move(cc)));
    const CurlField r1 = assemble_curl(g, [&](int i, int j) { return advect(gphi, gradient(omega.at(i, j))); });
    const CurlField r2 = assemble_curl(g, [&](int i, int j) {
      ScalarField acc = ScalarField::zeros(g);
      for (int k = 0; k < dim; ++k) {
        acc += partial2(phi_bl, k, i) * omega.at(k, j) - partial2(phi_bl, k, j) * omega.at(k, i);
      }
      return dealias(acc);
    });
    rep.absolute[3] = l2_curl(lhs - r1 - r2);
    rep.relative[3] = relative_of(rep.absolute[3], {l2_curl(lhs), l2_curl(r1), l2_curl(r2)});
  }
  return rep;
}

double equivalence_residual(const FluidModel& m, const ClassicalState& state) {
  const ScalarField& rho = state.rho;
  const Grid& g = rho.grid();
  const int dim = g.dim();
  const ClassicalRates orig = rhs_original(m, state);

  // d_t u = (d_t(rho u) - u d_t rho) / rho, then d_t v = d_t u + grad(phi'(rho) d_t rho).
  const ScalarField inv_rho = rho.map([](double r) { return 1.0 / r; });
  const ScalarField phi_p = rho.map([&](double r) { return phi_prime(m, r); });
  const VectorField dphi = gradient(dealias(phi_p * orig.drho_dt));
  std::vector<ScalarField> dv;
  for (int j = 0; j < dim; ++j) {
    const ScalarField du = inv_rho * (orig.dmomentum_dt[j] - state.u[j] * orig.drho_dt);
    dv.push_back(du + dphi[j]);
  }
  const VectorField chain(std::move(dv));

  const EffectiveRates eff = rhs_effective(m, rho, to_effective(m, rho, state.u));
  const double drho_gap = l2_norm(orig.drho_dt - eff.drho_dt);
  const double dv_gap = l2_vec(chain - eff.dv_dt);
  const double num = std::hypot(drho_gap, dv_gap);
  const double den = std::hypot(l2_norm(eff.drho_dt), l2_vec(eff.dv_dt));
  if (den < 1e-300) return num;
  return num / den;
}

}  // namespace bdns
