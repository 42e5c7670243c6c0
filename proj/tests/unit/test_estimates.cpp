#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bdns/estimates.hpp"
#include "bdns/scenario.hpp"
#include "support.hpp"

using namespace bdns;
using testing::field;
using testing::max_diff;

namespace {

const Grid& g64() {
  static const Grid g = Grid::make(2, 64);
  return g;
}

EstimateInputs inputs(ScalarField q0) { return EstimateInputs{std::move(q0), std::nullopt, std::nullopt}; }

}  // namespace

TEST_CASE("kind names") {
  for (auto k : {EstimateKind::Heat24, EstimateKind::TransportDiffusion25, EstimateKind::TransportDiffusion26,
                 EstimateKind::Transport27}) {
    CHECK(estimate_kind_from(to_string(k)) == k);
  }
  CHECK_THROWS_AS(estimate_kind_from("heat"), Error);
}

TEST_CASE("scalar ETD integration") {
  const ScalarField q0 = field(g64(), [](const Point& x) { return std::cos(3 * x[0]) + std::sin(x[1]); });
  const TimeSampledField h = integrate_scalar(q0, 0.7, {}, 0.2, 10);
  CHECK(h.sample_count() == 11);
  const ScalarField exact = field(g64(), [](const Point& x) {
    return std::exp(-0.7 * 9 * 0.2) * std::cos(3 * x[0]) + std::exp(-0.7 * 0.2) * std::sin(x[1]);
  });
  CHECK(max_diff(h.sample(10)[0], exact) < 1e-14);

  // linear damping through the explicit slot converges at second order
  auto err = [&](int steps) {
    const TimeSampledField d = integrate_scalar(q0, 0.7, [](const ScalarField& q) { return -2.0 * q; }, 0.5, steps);
    const ScalarField ex = field(g64(), [](const Point& x) {
      return std::exp(-(0.7 * 9 + 2) * 0.5) * std::cos(3 * x[0]) + std::exp(-(0.7 + 2) * 0.5) * std::sin(x[1]);
    });
    return max_diff(d.sample(static_cast<std::size_t>(steps))[0], ex);
  };
  CHECK(err(20) / err(40) > 3.5);
}

TEST_CASE("degenerate input") {
  CHECK_THROWS_AS(estimate_certificate(EstimateKind::Heat24, inputs(ScalarField::zeros(g64()))), Error);
}

TEST_CASE("heat estimate on a single block") {
  const ScalarField q0 = field(g64(), [](const Point& x) { return std::cos(4 * x[0]); });
  for (double mu : {1.0, 0.5, 2.0}) {
    EstimateInputs in = inputs(q0);
    in.mu = mu;
    in.steps = 2000;
    const EstimateReport r = estimate_certificate(EstimateKind::Heat24, in);
    const double exact = (1 - std::exp(-16 * mu * in.horizon)) / mu;
    CHECK(r.empirical_C == doctest::Approx(exact).epsilon(1e-5));
    CHECK(r.empirical_C <= 7.2 / mu);
  }
}

TEST_CASE("still transport and diffusion without drift") {
  const ScalarField q0 = steep_random_field(g64(), 3, 0, 0.5);
  const EstimateReport t = estimate_certificate(EstimateKind::Transport27, inputs(q0));
  CHECK(t.empirical_C == 1.0);
  CHECK(t.lhs == t.driver);

  EstimateInputs in = inputs(q0);
  in.cutoff_m = 2;
  CHECK(estimate_certificate(EstimateKind::TransportDiffusion26, in).empirical_C == doctest::Approx(1.0).epsilon(1e-13));

  const ScalarField b = field(g64(), [](const Point& x) { return std::cos(4 * x[0]); });
  EstimateInputs td = inputs(b);
  td.steps = 2000;
  const EstimateReport r = estimate_certificate(EstimateKind::TransportDiffusion25, td);
  CHECK(r.empirical_C == doctest::Approx(1.0 + (1 - std::exp(-16 * td.horizon))).epsilon(1e-5));
}

TEST_CASE("moving cases stay finite") {
  const ClassicalState cs = manufactured_classical(g64(), 0.1, 2);
  const ScalarField q0 = cs.rho - ScalarField::constant(g64(), 1.0);
  for (auto k : {EstimateKind::Heat24, EstimateKind::TransportDiffusion25, EstimateKind::TransportDiffusion26,
                 EstimateKind::Transport27}) {
    EstimateInputs in{q0, cs.u, q0};
    in.cutoff_m = 1;
    const EstimateReport r = estimate_certificate(k, in);
    CHECK(std::isfinite(r.empirical_C));
    CHECK(r.empirical_C > 0.0);
  }
}
