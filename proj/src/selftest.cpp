#include "bdns/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "bdns/constitutive.hpp"
#include "bdns/diagnostics.hpp"
#include "bdns/estimates.hpp"
#include "bdns/evolution.hpp"
#include "bdns/littlewood_paley.hpp"
#include "bdns/runner.hpp"
#include "bdns/scenario.hpp"
#include "bdns/text.hpp"

namespace bdns::selftest {

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_ = Clock::now();
};

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

CriterionResult finish(int id, std::string name, bool ok, std::string detail, const Timer& t, double budget) {
  const double secs = t.seconds();
  if (budget > 0.0 && secs >= budget) {
    ok = false;
    detail += "; runtime " + sci(secs) + " s over budget " + sci(budget) + " s";
  }
  return {id, std::move(name), ok, std::move(detail), secs};
}

double relative_max(const ScalarField& a, const ScalarField& b, double scale) { return (a - b).max_abs() / scale; }

std::size_t slot_of(const Grid& g, std::array<int, 3> k) {
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    if (g.mode(s) == k) return s;
  }
  throw Error(ErrorCode::BadValue, "mode not stored in the half spectrum");
}

void record(MassLedger& ledger, const std::string& label, const Trajectory& traj) {
  if (!traj.completed || traj.states.empty()) return;
  const double m0 = mass_total(traj.states.front().rho());
  const double span = traj.times.back() - traj.times.front();
  ledger.record(label, mass_drift(traj) / (std::abs(m0) * std::max(span, 1.0)));
}

FluidModel model(double mu, double alpha, double gamma, int dim = 2) { return make_model(mu, alpha, gamma, 1.0, dim); }

EffectiveState scenario(const std::string& name, const Grid& g, const FluidModel& m, std::optional<double> amp,
                        std::uint64_t seed = 1) {
  ScenarioConfig sc;
  sc.name = name;
  sc.amplitude = amp;
  sc.seed = seed;
  return scenario_init(sc, g, m);
}

double state_distance(const EffectiveState& a, const EffectiveState& b) {
  double acc = 0.0;
  acc += std::pow(l2_norm(a.q - b.q), 2) + std::pow(l2_norm(a.divv - b.divv), 2);
  for (std::size_t i = 0; i < a.curlv.upper().size(); ++i) acc += std::pow(l2_norm(a.curlv.upper()[i] - b.curlv.upper()[i]), 2);
  for (std::size_t j = 0; j < a.mean_v.size(); ++j) acc += std::pow(a.mean_v[j] - b.mean_v[j], 2);
  return std::sqrt(acc);
}

}  // namespace

void MassLedger::record(const std::string& label, double normalised_drift) {
  entries_.emplace_back(label, normalised_drift);
}

CriterionResult partition_of_unity() {
  const Timer t;
  const Grid g = Grid::make(2, 64);
  const CutoffFamily cutoffs(g);
  double worst = 0.0;
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    const double r = g.radius(s);
    if (r == 0.0) continue;
    double sum = 0.0;
    for (int l = cutoffs.l_min(); l <= cutoffs.l_max(); ++l) sum += phi(std::ldexp(r, -l));
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return finish(1, "partition of unity", worst < 1e-12, "max |sum phi - 1| = " + sci(worst), t, 1.0);
}

CriterionResult lp_reconstruction() {
  const Timer t;
  const Grid g = Grid::make(2, 64);
  const CutoffFamily cutoffs(g);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const ScalarField f = band_limited_field(g, 100 + k, 0, g.dealias_limit(), 1.0);
    ScalarField sum = ScalarField::zeros(g);
    for (const auto& b : dyadic_blocks(cutoffs, f)) sum += b;
    worst = std::max(worst, relative_max(f, sum, f.max_abs()));
  }
  return finish(2, "Littlewood-Paley reconstruction", worst < 1e-12,
                "max ||f - sum Delta_l f||_inf / ||f||_inf = " + sci(worst), t, 5.0);
}

CriterionResult bony_exactness() {
  const Timer t;
  const Grid g = Grid::make(2, 64);
  const CutoffFamily cutoffs(g);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const ScalarField f = band_limited_field(g, 100 + k, 0, g.dealias_limit(), 1.0);
    const ScalarField h = band_limited_field(g, 200 + k, 0, g.dealias_limit(), 1.0);
    const BonyParts parts = bony_decompose(cutoffs, f, h);
    const ScalarField fh = dealiased_product(f, h);
    worst = std::max(worst, relative_max(parts.t_fg + parts.t_gf + parts.remainder, fh, fh.max_abs()));
  }
  return finish(3, "Bony decomposition exactness", worst < 1e-11, "max relative defect = " + sci(worst), t, 5.0);
}

CriterionResult identity_suite() {
  const Timer t;
  double worst = 0.0;
  auto one = [&](const Grid& g, double alpha, std::uint64_t seed) {
    const FieldTriple tr = random_triple(g, seed, g.points_per_axis() / 8.0);
    worst = std::max(worst, identity_residuals(model(1.0, alpha, 2.0, g.dim()), tr.rho, tr.u, tr.v).max_relative());
  };
  const Grid g2 = Grid::make(2, 64);
  for (std::uint64_t k = 0; k < 20; ++k) one(g2, k % 2 == 0 ? 1.0 : 2.0, 300 + k);
  one(Grid::make(3, 32), 2.0, 400);
  return finish(4, "identity suite", worst < 1e-10, "max relative residual over 21 triples = " + sci(worst), t, 30.0);
}

CriterionResult formulation_equivalence() {
  const Timer t;
  const Grid g = Grid::make(2, 64);
  double worst = 0.0;
  for (double alpha : {1.0, 2.0}) {
    for (double gamma : {1.4, 2.0}) {
      const FluidModel m = model(1.0, alpha, gamma);
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        worst = std::max(worst, equivalence_residual(m, manufactured_classical(g, 0.1, seed)));
      }
    }
  }
  return finish(5, "formulation equivalence", worst < 1e-8, "max relative residual = " + sci(worst), t, 30.0);
}

CriterionResult linear_references(MassLedger& ledger) {
  const Timer t;
  std::ostringstream detail;
  bool ok = true;

  // (a) closed-form decay of single modes
  {
    const Grid g = Grid::make(2, 64);
    const FluidModel m = model(1.0, 2.0, 2.0);  // mu'(1) = 2, mu(1) = 1
    const ScalarField q0 = ScalarField::from_function(g, [](const Point& x) { return 0.05 * std::cos(3 * x[0] + 2 * x[1]); });
    const ScalarField w0 = ScalarField::from_function(g, [](const Point& x) { return 0.2 * std::cos(x[0] - 4 * x[1]); });
    double worst = 0.0;
    for (double time : {0.0, 0.01, 0.1, 0.5}) {
      const HeatSolution h = heat_propagate(q0, CurlField(g, {w0}), m, time);
      const ScalarField qe = std::exp(-2.0 * 2.0 * 13.0 * time) * q0;
      const ScalarField we = std::exp(-1.0 * 17.0 * time) * w0;
      worst = std::max({worst, relative_max(h.q, qe, 0.05), relative_max(h.curlv.upper()[0], we, 0.2)});
    }
    ok = ok && worst < 1e-12;
    detail << "single mode " << sci(worst);
  }

  // (b) IMEX with sources off against the heat propagator, step by step
  {
    const Grid g = Grid::make(2, 64);
    const FluidModel m = model(1.0, 2.0, 2.0);
    ScenarioConfig sc{"large_data", 0.3, std::nullopt, 3};
    const EffectiveState s0 = scenario_init(sc, g, m);
    EffectiveState s = s0;
    const double dt = 0.01;
    const double qs = s0.q.max_abs();
    double worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
      s = imex_step(s, m, dt, 1.0, {.sources_off = true});
      const HeatSolution h = heat_propagate(s0.q, s0.curlv, m, n * dt);
      worst = std::max({worst, relative_max(s.q, h.q, qs), relative_max(s.curlv.upper()[0], h.curlv.upper()[0], qs),
                        relative_max(s.divv, s0.divv, qs)});
    }
    ok = ok && worst < 1e-12;
    detail << "; sources off " << sci(worst);
  }

  // (c) small-amplitude nonlinear runs against the linear hybrid oracle
  {
    const Grid g = Grid::make(2, 32);
    double worst = 0.0;
    for (double gamma : {2.0, 1.4}) {
      const FluidModel m = model(1.0, 1.0, gamma);
      const double a = 1e-4;
      EffectiveState s0{
          ScalarField::from_function(g, [a](const Point& x) { return a * (std::cos(x[0]) + 0.5 * std::sin(2 * x[1])); }),
          ScalarField::from_function(g, [a](const Point& x) { return 0.3 * a * std::cos(x[0] + x[1]); }),
          CurlField::zeros(g), {0.0, 0.0}};
      StepControl ctl;
      ctl.dt = 2.5e-4;
      ctl.t_end = 1.0;
      ctl.snapshot_every = 200;
      const Trajectory traj = run(s0, m, ctl);
      record(ledger, "hybrid tracking", traj);
      if (!traj.completed) {
        ok = false;
        detail << "; tracking run aborted: " << traj.abort_message;
        break;
      }
      const double mu1 = viscosity(m, 1.0).first;
      const double c2 = pressure_prime(m, 1.0);
      const auto q0h = s0.q.spectrum();
      const auto d0h = s0.divv.spectrum();
      for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto qh = traj.states[i].q.spectrum();
        const auto dh = traj.states[i].divv.spectrum();
        for (std::array<int, 3> k : {std::array<int, 3>{1, 0, 0}, std::array<int, 3>{0, 2, 0}, std::array<int, 3>{1, 1, 0}}) {
          const std::size_t sl = slot_of(g, k);
          const HybridMode o = linear_hybrid_oracle(q0h[sl], d0h[sl], g.k_squared(sl), mu1, traj.times[i], c2);
          const double scale = std::max(std::abs(q0h[sl]), std::abs(d0h[sl]));
          worst = std::max({worst, std::abs(qh[sl] - o.q) / scale, std::abs(dh[sl] - o.d) / scale});
        }
      }
    }
    ok = ok && worst < 1e-6;
    detail << "; hybrid tracking " << sci(worst);
  }
  return finish(6, "linear references", ok, detail.str(), t, 60.0);
}

CriterionResult mass_conservation(MassLedger& ledger) {
  const Timer t;
  if (ledger.entries().empty()) {
    const Grid g = Grid::make(2, 32);
    const FluidModel m = model(1.0, 1.0, 2.0);
    StepControl ctl;
    ctl.dt = 0.005;
    ctl.t_end = 0.5;
    record(ledger, "manufactured", run(scenario("manufactured", g, m, std::nullopt), m, ctl));
  }
  double worst = 0.0;
  std::string who;
  for (const auto& [label, drift] : ledger.entries()) {
    if (drift >= worst) {
      worst = drift;
      who = label;
    }
  }
  return finish(7, "mass conservation", worst < 1e-12,
                std::to_string(ledger.entries().size()) + " runs, worst drift / (mass0 max(T,1)) = " + sci(worst) +
                    " (" + who + ")",
                t, 0.0);
}

CriterionResult entropy_surrogate(MassLedger& ledger) {
  const Timer t;
  const Grid g = Grid::make(2, 64);
  const FluidModel m = model(1.0, 1.0, 2.0);
  StepControl ctl;
  ctl.dt = 0.005;
  ctl.t_end = 1.0;
  ctl.snapshot_every = 1;
  const Trajectory traj = run(scenario("small_data", g, m, 1e-3), m, ctl);
  record(ledger, "small_data", traj);
  if (!traj.completed) return finish(8, "entropy surrogate", false, "run aborted: " + traj.abort_message, t, 120.0);
  const EntropyCheck chk = entropy_monotone_check(traj, m);
  return finish(8, "entropy surrogate", chk.passed,
                "E(0) = " + sci(chk.totals.front()) + ", E(T) = " + sci(chk.totals.back()) + ", max step increase " +
                    sci(chk.max_increase) + " vs tol " + sci(chk.tolerance),
                t, 120.0);
}

CriterionResult parabolic_smoothing(MassLedger& ledger) {
  const Timer t;
  const Grid g = Grid::make(2, 64);
  const FluidModel m = model(1.0, 1.0, 2.0);
  StepControl ctl;
  ctl.dt = 1e-3;
  ctl.t_end = 0.2;
  ctl.snapshot_every = 1;
  const Trajectory traj = run(scenario("large_data", g, m, 0.3), m, ctl);
  record(ledger, "large_data", traj);
  if (!traj.completed) return finish(9, "parabolic smoothing", false, "run aborted: " + traj.abort_message, t, 300.0);

  const SmoothingCertificate cert = smoothing_certificate(traj, m);
  std::ostringstream detail;
  bool ok = true;
  int checked = 0;
  for (const auto& b : cert.blocks) {
    if (b.l < 2 || !b.active || !b.resolved) continue;
    ++checked;
    ok = ok && b.ratio >= 0.5 && b.ratio <= 1.5;
    detail << "l=" << b.l << " ratio " << sci(b.ratio) << "; ";
  }
  ok = ok && checked > 0;
  const bool budget_ok = std::isfinite(cert.l1_besov_budget) && cert.l1_besov_budget > 0.0;
  ok = ok && budget_ok;
  detail << "L1 B^{N/p+2} budget " << sci(cert.l1_besov_budget);
  const TransportContrast tc = transport_contrast_certificate(traj);
  ok = ok && tc.bounded;
  detail << "; div v max block ratio " << sci(tc.max_ratio);
  return finish(9, "parabolic smoothing", ok, detail.str(), t, 300.0);
}

CriterionResult self_convergence(MassLedger& ledger) {
  const Timer t;
  const Grid g = Grid::make(2, 64);
  const FluidModel m = model(1.0, 1.0, 2.0);
  const EffectiveState s0 = scenario("manufactured", g, m, std::nullopt);
  auto final_state = [&](double dt) {
    StepControl ctl;
    ctl.dt = dt;
    ctl.t_end = 1.0;
    ctl.snapshot_every = 1 << 20;
    Trajectory traj = run(s0, m, ctl);
    record(ledger, "manufactured dt=" + sci(dt), traj);
    if (!traj.completed) throw Error(*traj.abort_code, traj.abort_message);
    return traj.states.back();
  };
  const EffectiveState ref = final_state(0.00125);
  std::vector<double> errs;
  for (double dt : {0.02, 0.01, 0.005}) errs.push_back(state_distance(final_state(dt), ref));
  const double r1 = errs[0] / errs[1];
  const double r2 = errs[1] / errs[2];
  return finish(10, "IMEX self-convergence", r1 >= 3.5 && r2 >= 3.5,
                "errors " + sci(errs[0]) + ", " + sci(errs[1]) + ", " + sci(errs[2]) + "; ratios " + sci(r1) + ", " +
                    sci(r2),
                t, 120.0);
}

CriterionResult estimate_certificates() {
  const Timer t;
  std::ostringstream detail;
  bool ok = true;

  // heat24 on single dyadic blocks against 7.2 / mu
  double worst_heat = 0.0;
  {
    const Grid g = Grid::make(2, 64);
    const CutoffFamily cutoffs(g);
    for (double mu : {1.0, 0.5}) {
      for (int l = 0; l <= 4; ++l) {
        EstimateInputs in{dyadic_block(cutoffs, steep_random_field(g, 11, 0, 1.0), l), std::nullopt, std::nullopt};
        in.mu = mu;
        worst_heat = std::max(worst_heat, mu * estimate_certificate(EstimateKind::Heat24, in).empirical_C);
      }
    }
  }
  ok = ok && worst_heat <= 7.2;
  detail << "max mu * C(heat24 block) = " << sci(worst_heat);

  // transport27 without advection
  double c_still = 0.0;
  {
    const Grid g = Grid::make(2, 64);
    EstimateInputs in{steep_random_field(g, 12, 0, 1.0), std::nullopt, std::nullopt};
    c_still = estimate_certificate(EstimateKind::Transport27, in).empirical_C;
  }
  ok = ok && c_still == 1.0;
  detail << "; transport27(u=0) C = " << to_text(c_still);

  // every kind on the same analytic data (broad but decaying spectrum) at 64^2 and 128^2
  auto constants = [](int n) {
    const Grid g = Grid::make(2, n);
    ScalarField q0 = ScalarField::from_function(g, [](const Point& x) {
      return 0.02 * std::exp(2.0 * std::cos(x[0]) + 1.5 * std::sin(x[1] + 0.4));
    });
    q0 = remove_mean(q0);
    const VectorField u({ScalarField::from_function(g, [](const Point& x) { return 0.3 * std::sin(x[1]) + 0.1 * std::cos(x[0] + x[1]); }),
                         ScalarField::from_function(g, [](const Point& x) { return 0.2 * std::cos(2.0 * x[0]) - 0.1 * std::sin(x[0] - x[1]); })});
    std::vector<double> out;
    for (auto kind : {EstimateKind::Heat24, EstimateKind::TransportDiffusion25, EstimateKind::TransportDiffusion26,
                      EstimateKind::Transport27}) {
      EstimateInputs in{q0, u, std::nullopt};
      in.cutoff_m = 2;
      if (kind == EstimateKind::TransportDiffusion25) in.coefficient = q0;
      out.push_back(estimate_certificate(kind, in).empirical_C);
    }
    return out;
  };
  const auto c64 = constants(64);
  const auto c128 = constants(128);
  double worst_shift = 0.0;
  bool finite = std::isfinite(worst_heat);
  for (std::size_t i = 0; i < c64.size(); ++i) {
    finite = finite && std::isfinite(c64[i]) && std::isfinite(c128[i]);
    worst_shift = std::max(worst_shift, std::abs(c128[i] / c64[i] - 1.0));
  }
  ok = ok && finite && worst_shift <= 0.2;
  detail << "; C(64) = {" << sci(c64[0]) << ", " << sci(c64[1]) << ", " << sci(c64[2]) << ", " << sci(c64[3])
         << "}, C(128) = {" << sci(c128[0]) << ", " << sci(c128[1]) << ", " << sci(c128[2]) << ", " << sci(c128[3])
         << "}, max refinement shift " << sci(worst_shift);
  return finish(11, "estimate certificates", ok, detail.str(), t, 180.0);
}

CriterionResult determinism(MassLedger& ledger) {
  const Timer t;
  const auto root = std::filesystem::temp_directory_path() / ("bdns_selftest_" + std::to_string(::getpid()));
  const std::string base =
      "[model]\nmu = 1\nalpha = 1\ngamma = 2\ndim = 2\n"
      "[grid]\npoints_per_axis = 32\n"
      "[control]\ndt = 0.01\nt_end = 0.2\nsnapshot_every = 1\n"
      "[scenario]\nname = small_data\nseed = 42\n"
      "[checks]\nlist = mass\n";
  std::vector<std::string> csv;
  std::ostringstream log;
  for (int k = 0; k < 2; ++k) {
    const auto dir = root / ("run" + std::to_string(k));
    RunConfig c = parse_config(base + "[outputs]\ndirectory = " + dir.string() + "\n");
    const int code = execute(c, log);
    if (code != kExitOk) {
      std::filesystem::remove_all(root);
      return finish(12, "determinism", false, "run exited with " + std::to_string(code), t, 0.0);
    }
    std::ifstream in(dir / "timeseries.csv", std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    csv.push_back(buf.str());
  }
  std::ifstream cert(root / "run0" / "certificates.json");
  const auto doc = nlohmann::json::parse(cert);
  const double drift = doc.at("mass").at("drift").get<double>() / std::abs(doc.at("mass").at("initial").get<double>());
  ledger.record("determinism replay", drift);
  std::filesystem::remove_all(root);
  const bool same = !csv[0].empty() && csv[0] == csv[1];
  return finish(12, "determinism", same,
                same ? "time-series CSVs bit-identical (" + std::to_string(csv[0].size()) + " bytes)" : "CSVs differ", t,
                0.0);
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "] " << r.name << " ("
    << std::fixed;
  s.precision(2);
  s << r.seconds << " s): " << r.detail;
  return s.str();
}

std::vector<CriterionResult> run_suite(const std::vector<int>& selected, std::ostream& out) {
  auto want = [&](int id) { return selected.empty() || std::find(selected.begin(), selected.end(), id) != selected.end(); };
  MassLedger ledger;
  const std::vector<std::pair<int, std::function<CriterionResult()>>> order{
      {1, partition_of_unity},
      {2, lp_reconstruction},
      {3, bony_exactness},
      {4, identity_suite},
      {5, formulation_equivalence},
      {6, [&] { return linear_references(ledger); }},
      {8, [&] { return entropy_surrogate(ledger); }},
      {9, [&] { return parabolic_smoothing(ledger); }},
      {10, [&] { return self_convergence(ledger); }},
      {11, estimate_certificates},
      {12, [&] { return determinism(ledger); }},
      {7, [&] { return mass_conservation(ledger); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& [id, fn] : order) {
    if (!want(id)) continue;
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("threw: ") + e.what(), 0.0};
    }
    out << format_line(r) << std::endl;
    results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return results;
}

}  // namespace bdns::selftest
