#include "bdns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bdns/constitutive.hpp"

namespace bdns {

EntropyReport entropy_report(const FluidModel& m, const ScalarField& rho, const VectorField& v) {
  require_density(rho);
  const Grid& g = rho.grid();
  const int dim = g.dim();
  const double dv = g.cell_volume();
  const CurlField omega = curl_matrix(v);
  const VectorField grho = gradient(rho);
  const double pi_bar = Pi_of(m, m.rho_bar);

  EntropyReport rep;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = rho[i];
    double v2 = 0.0;
    for (int j = 0; j < dim; ++j) v2 += v[j][i] * v[j][i];
    double w2 = 0.0;
    for (const auto& e : omega.upper()) w2 += 2.0 * e[i] * e[i];
    double g2 = 0.0;
    for (int j = 0; j < dim; ++j) g2 += grho[j][i] * grho[j][i];
    rep.kinetic_unhalved += r * v2;
    rep.potential += Pi_of(m, r) - pi_bar;
    rep.dissipation_curl += 0.5 * viscosity(m, r).value * w2;
    rep.dissipation_pressure += pressure_prime(m, r) * phi_prime(m, r) * g2;
  }
  rep.kinetic_unhalved *= dv;
  rep.kinetic = 0.5 * rep.kinetic_unhalved;
  rep.potential *= dv;
  rep.dissipation_curl *= dv;
  rep.dissipation_pressure *= dv;
  rep.total = rep.kinetic + rep.potential;
  return rep;
}

EntropyReport entropy_report(const FluidModel& m, const EffectiveState& state) {
  return entropy_report(m, state.rho(), reconstruct_v(state.divv, state.curlv, state.mean_v));
}

EntropyCheck entropy_monotone_check(std::span<const double> totals, double dt) {
  EntropyCheck chk;
  chk.totals.assign(totals.begin(), totals.end());
  if (totals.empty()) return chk;
  const double e0 = totals.front();
  chk.tolerance = 1e-8 * std::abs(e0) + 10.0 * dt * dt * std::abs(e0);
  for (std::size_t i = 1; i < totals.size(); ++i) chk.max_increase = std::max(chk.max_increase, totals[i] - totals[i - 1]);
  chk.passed = chk.max_increase <= chk.tolerance;
  return chk;
}

EntropyCheck entropy_monotone_check(const Trajectory& traj, const FluidModel& m) {
  std::vector<double> totals;
  for (const auto& s : traj.states) totals.push_back(entropy_report(m, s).total);
  return entropy_monotone_check(totals, traj.dt);
}

double mass_total(const ScalarField& rho) { return rho.integral(); }

double mass_drift(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  const double m0 = mass_total(traj.states.front().rho());
  double drift = 0.0;
  for (const auto& s : traj.states) drift = std::max(drift, std::abs(mass_total(s.rho()) - m0));
  return drift;
}

double log_slope(std::span<const double> times, std::span<const double> values) {
  const std::size_t n = times.size();
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += times[i];
    sy += std::log(values[i]);
  }
  st /= static_cast<double>(n);
  sy /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (times[i] - st) * (std::log(values[i]) - sy);
    den += (times[i] - st) * (times[i] - st);
  }
  return den > 0.0 ? num / den : 0.0;
}

namespace {

constexpr double kActiveEnergy = 1e-12;

TimeSampledField q_history(const Trajectory& traj) {
  TimeSampledField h;
  for (std::size_t i = 0; i < traj.states.size(); ++i) h.append(traj.times[i], traj.states[i].q);
  return h;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t b) {
  std::vector<double> c;
  for (const auto& r : rows) c.push_back(r[b]);
  return c;
}

}  // namespace

SmoothingCertificate smoothing_certificate(const Trajectory& traj, const FluidModel& m, double p) {
  if (traj.states.size() < 3) throw Error(ErrorCode::TooFewSamples, "smoothing fit needs at least three states");
  double peak = 0.0;
  for (const auto& s : traj.states) peak = std::max(peak, s.q.max_abs());
  if (peak < 1e-14) throw Error(ErrorCode::Degenerate, "q vanishes along the trajectory");

  const Grid& g = traj.states.front().grid();
  const CutoffFamily cutoffs(g);
  const TimeSampledField h = q_history(traj);
  const auto rows = block_norm_history(cutoffs, h, 2.0);
  const double aq = 2.0 * viscosity(m, 1.0).first;
  const double resolved_radius = g.dealias_limit() * g.wavenumber_unit();

  SmoothingCertificate cert;
  cert.p = p;
  for (std::size_t b = 0; b < static_cast<std::size_t>(cutoffs.block_count()); ++b) {
    BlockRate br;
    br.l = cutoffs.l_min() + static_cast<int>(b);
    const auto series = column(rows, b);
    br.initial_norm = series.front();
    br.active = series.front() * series.front() > kActiveEnergy;
    br.resolved = std::exp2(br.l + 1) <= resolved_radius;
    br.reference = aq * std::exp2(2.0 * br.l);
    if (br.active) {
      // first e-folding, at least three samples
      std::size_t end = 1;
      while (end < series.size() && series[end - 1] > series.front() / std::numbers::e) ++end;
      end = std::max<std::size_t>(end, 3);
      end = std::min(end, series.size());
      std::size_t usable = 0;
      while (usable < end && series[usable] > 0.0) ++usable;
      br.samples = static_cast<int>(usable);
      if (usable >= 2) {
        br.rate = -log_slope(std::span(h.times().data(), usable), std::span(series.data(), usable));
        br.ratio = br.rate / br.reference;
      }
    }
    cert.blocks.push_back(br);
  }
  const double n = g.dim();
  cert.l1_besov_budget = chemin_lerner_norm(cutoffs, h, 1.0, {n / p + 2.0, p, 1.0});
  return cert;
}

TransportContrast transport_contrast_certificate(const Trajectory& traj) {
  if (traj.states.size() < 2) throw Error(ErrorCode::TooFewSamples, "transport certificate needs two states");
  const Grid& g = traj.states.front().grid();
  const CutoffFamily cutoffs(g);
  TimeSampledField h;
  for (std::size_t i = 0; i < traj.states.size(); ++i) h.append(traj.times[i], traj.states[i].divv);
  const auto rows = block_norm_history(cutoffs, h, 2.0);

  TransportContrast rep;
  for (std::size_t b = 0; b < static_cast<std::size_t>(cutoffs.block_count()); ++b) {
    const auto series = column(rows, b);
    if (!(series.front() * series.front() > kActiveEnergy)) continue;
    BlockGrowth bg;
    bg.l = cutoffs.l_min() + static_cast<int>(b);
    bg.initial_norm = series.front();
    bg.max_norm = *std::max_element(series.begin(), series.end());
    bg.ratio = bg.max_norm / bg.initial_norm;
    if (std::all_of(series.begin(), series.end(), [](double x) { return x > 0.0; })) {
      bg.fitted_rate = -log_slope(h.times(), series);
    }
    rep.max_ratio = std::max(rep.max_ratio, bg.ratio);
    rep.blocks.push_back(bg);
  }
  if (rep.blocks.empty()) throw Error(ErrorCode::Degenerate, "div v has no initial dyadic content");
  rep.bounded = rep.max_ratio <= 2.0;
  return rep;
}

}  // namespace bdns
