#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "bdns/constitutive.hpp"
#include "bdns/evolution.hpp"
#include "bdns/littlewood_paley.hpp"
#include "bdns/scenario.hpp"
#include "support.hpp"

using namespace bdns;
using testing::field;
using testing::max_diff;

namespace {

FluidModel model(double alpha, double gamma = 2.0) { return make_model(1.0, alpha, gamma, 1.0, 2); }

EffectiveState rest(const Grid& g) {
  return {ScalarField::zeros(g), ScalarField::zeros(g), CurlField::zeros(g), {0.0, 0.0}};
}

// Classical RK4 on the 2x2 system q' = -2 mu k2 q - d, d' = c2 k2 q.
std::array<Complex, 2> rk4(Complex q, Complex d, double k2, double mu, double c2, double t, int steps) {
  const double h = t / steps;
  auto f = [&](Complex a, Complex b) { return std::array<Complex, 2>{-2 * mu * k2 * a - b, c2 * k2 * a}; };
  for (int i = 0; i < steps; ++i) {
    const auto k1 = f(q, d);
    const auto k2_ = f(q + 0.5 * h * k1[0], d + 0.5 * h * k1[1]);
    const auto k3 = f(q + 0.5 * h * k2_[0], d + 0.5 * h * k2_[1]);
    const auto k4 = f(q + h * k3[0], d + h * k3[1]);
    q += h / 6 * (k1[0] + 2.0 * k2_[0] + 2.0 * k3[0] + k4[0]);
    d += h / 6 * (k1[1] + 2.0 * k2_[1] + 2.0 * k3[1] + k4[1]);
  }
  return {q, d};
}

}  // namespace

TEST_CASE("frozen heat propagator") {
  const Grid g = Grid::make(2, 32);
  const ScalarField q0 = field(g, [](const Point& x) { return 0.1 * std::cos(2 * x[0]); });
  const HeatSolution h = heat_propagate(q0, CurlField::zeros(g), model(1.0), 0.1);
  CHECK(max_diff(h.q, std::exp(-0.8) * q0) < 1e-15);

  const CurlField w0(g, {field(g, [](const Point& x) { return std::sin(x[0] + x[1]); })});
  const HeatSolution id = heat_propagate(q0, w0, model(2.0), 0.0);
  CHECK(max_diff(id.q, q0) < 1e-15);
  CHECK(max_diff(id.curlv.upper()[0], w0.upper()[0]) < 1e-15);
  CHECK_THROWS_AS(heat_propagate(q0, w0, model(1.0), -1.0), Error);

  // two modes against a fine explicit Euler integration of q_t = 2 mu'(1) lap q, w_t = mu(1) lap w
  const Grid s = Grid::make(2, 16);
  const FluidModel m = model(1.0);
  ScalarField q = field(s, [](const Point& x) { return std::sin(x[0]) + 0.5 * std::cos(x[0] + x[1]); });
  ScalarField w = field(s, [](const Point& x) { return std::cos(x[0] - x[1]) + 0.3 * std::sin(x[1]); });
  const HeatSolution exact = heat_propagate(q, CurlField(s, {w}), m, 0.01);
  const double dt = 1e-5;
  for (int n = 0; n < 1000; ++n) {
    q += (2 * dt) * laplacian(q);
    w += dt * laplacian(w);
  }
  CHECK(max_diff(exact.q, q) < 1e-6);
  CHECK(max_diff(exact.curlv.upper()[0], w) < 1e-6);
}

TEST_CASE("linear hybrid oracle") {
  // k = 0: constant when d0 = 0 (the mean of a divergence); otherwise q drifts as q0 - d0 t
  const HybridMode z = linear_hybrid_oracle({0.3, -0.1}, {0.0, 0.0}, 0.0, 1.0, 5.0);
  CHECK(std::abs(z.q - Complex(0.3, -0.1)) < 1e-15);
  CHECK(std::abs(z.d) == 0.0);
  const HybridMode drift = linear_hybrid_oracle({0.3, -0.1}, {0.2, 0.4}, 0.0, 1.0, 5.0);
  CHECK(std::abs(drift.q - Complex(-0.7, -2.1)) < 1e-14);
  CHECK(std::abs(drift.d - Complex(0.2, 0.4)) < 1e-15);

  // |k|^2 = 1, mu = 1/2: eigenvalues (-1 +- i sqrt 3)/2
  for (double t : {0.5, 2.0, 8.0}) {
    const HybridMode h = linear_hybrid_oracle({1.0, 0.0}, {0.0, 0.0}, 1.0, 0.5, t);
    const auto r = rk4({1.0, 0.0}, {0.0, 0.0}, 1.0, 0.5, 1.0, t, 20000);
    CHECK(std::abs(h.q - r[0]) < 1e-12);
    CHECK(std::abs(h.d - r[1]) < 1e-12);
    CHECK(std::hypot(std::abs(h.q), std::abs(h.d)) <= 1.5 * std::exp(-t / 2));
  }

  // overdamped and general pressure slope
  for (auto [k2, mu, c2] : {std::array<double, 3>{9.0, 1.0, 1.0}, std::array<double, 3>{2.0, 0.3, 1.4},
                            std::array<double, 3>{0.25, 0.5, 1.0}}) {
    const HybridMode h = linear_hybrid_oracle({0.5, 0.2}, {-0.3, 0.1}, k2, mu, 0.7, c2);
    const auto r = rk4({0.5, 0.2}, {-0.3, 0.1}, k2, mu, c2, 0.7, 20000);
    CHECK(std::abs(h.q - r[0]) < 1e-11);
    CHECK(std::abs(h.d - r[1]) < 1e-11);
  }

  // overdamped: after the transient q keeps one sign
  double prev = linear_hybrid_oracle({1.0, 0.0}, {0.0, 0.0}, 16.0, 1.0, 0.5).q.real();
  for (double t = 0.6; t < 3.0; t += 0.1) {
    const double cur = linear_hybrid_oracle({1.0, 0.0}, {0.0, 0.0}, 16.0, 1.0, t).q.real();
    CHECK(cur * prev > 0.0);
    CHECK(std::abs(cur) < std::abs(prev));
    prev = cur;
  }
}

TEST_CASE("single IMEX step") {
  const Grid g = Grid::make(2, 32);
  const FluidModel m = model(2.0);
  const EffectiveState r = rest(g);
  const EffectiveState s = imex_step(r, m, 0.01);
  CHECK(s.q.max_abs() == 0.0);
  CHECK(s.divv.max_abs() == 0.0);
  CHECK(s.curlv.upper()[0].max_abs() == 0.0);

  ScenarioConfig sc{"large_data", 0.3, std::nullopt, 4};
  const EffectiveState s0 = scenario_init(sc, g, m);
  const EffectiveState off = imex_step(s0, m, 0.05, 1.0, {.sources_off = true});
  const HeatSolution h = heat_propagate(s0.q, s0.curlv, m, 0.05);
  CHECK(max_diff(off.q, h.q) < 1e-12 * s0.q.max_abs());
  CHECK(max_diff(off.curlv.upper()[0], h.curlv.upper()[0]) < 1e-12 * s0.q.max_abs());
  CHECK(max_diff(off.divv, s0.divv) < 1e-15);

  const double limit = max_stable_dt(s0, m, 1.0);
  CHECK(limit > 0.0);
  bool cfl = false;
  try {
    imex_step(s0, m, 2.0 * limit, 1.0);
  } catch (const Error& e) {
    cfl = e.code() == ErrorCode::CflViolation;
  }
  CHECK(cfl);
}

TEST_CASE("runs") {
  const Grid g = Grid::make(2, 32);
  const FluidModel m = model(1.0);
  StepControl ctl;
  ctl.dt = 0.03;
  ctl.t_end = 0.1;
  ctl.snapshot_every = 1;
  const Trajectory still = run(rest(g), m, ctl);
  CHECK(still.completed);
  REQUIRE(still.times.size() == 5);
  CHECK(still.times.back() == 0.1);
  for (const auto& s : still.states) CHECK(s.q.max_abs() == 0.0);

  EffectiveState thin = rest(g);
  thin.q = field(g, [](const Point& x) { return -1.0 + 0.5 * (1 + std::cos(x[0])); });
  const Trajectory dead = run(thin, m, ctl);
  CHECK_FALSE(dead.completed);
  CHECK(dead.abort_code == ErrorCode::VacuumApproach);
  CHECK(dead.states.empty());

  // small data over a long horizon stays bounded
  ScenarioConfig sc{"small_data", 1e-3, std::nullopt, 2};
  const EffectiveState s0 = scenario_init(sc, g, m);
  StepControl longrun;
  longrun.dt = 0.02;
  longrun.t_end = 10.0;
  longrun.snapshot_every = 50;
  int observed = 0;
  const Trajectory traj = run(s0, m, longrun, {}, [&](double, const EffectiveState&) { ++observed; });
  CHECK(traj.completed);
  CHECK(observed == 501);
  CHECK(traj.times.back() == doctest::Approx(10.0));
  const CutoffFamily c(g);
  const BesovSpec crit{1.0, 2.0, 1.0};
  const double q0 = besov_norm(c, s0.q, crit);
  const double d0 = besov_norm(c, s0.divv, {0.0, 2.0, 1.0});
  for (const auto& s : traj.states) {
    CHECK(besov_norm(c, s.q, crit) <= 2.0 * q0);
    CHECK(besov_norm(c, s.divv, {0.0, 2.0, 1.0}) <= 2.0 * d0);
  }
}
