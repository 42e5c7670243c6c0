#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bdns/constitutive.hpp"
#include "bdns/formulations.hpp"
#include "bdns/scenario.hpp"
#include "support.hpp"

using namespace bdns;
using testing::field;
using testing::max_diff;

namespace {

const Grid& g32() {
  static const Grid g = Grid::make(2, 32);
  return g;
}

FluidModel model(double alpha, double gamma = 2.0, int dim = 2) { return make_model(1.0, alpha, gamma, 1.0, dim); }

ScalarField one(const Grid& g) { return ScalarField::constant(g, 1.0); }

double rel(const ScalarField& a, const ScalarField& b) {
  const double s = std::max(l2_norm(a), l2_norm(b));
  return s == 0.0 ? 0.0 : l2_norm(a - b) / s;
}

}  // namespace

TEST_CASE("effective velocity transform") {
  const Grid& g = g32();
  const VectorField u({field(g, [](const Point& x) { return std::sin(x[1]); }),
                       field(g, [](const Point& x) { return std::cos(x[0] + x[1]); })});
  const VectorField v = to_effective(model(1.0), one(g), u);
  CHECK(max_diff(v[0], u[0]) < 1e-15);
  CHECK(max_diff(v[1], u[1]) < 1e-15);

  const ScalarField rho = field(g, [](const Point& x) { return std::exp(std::sin(x[0])); });
  const VectorField w = to_effective(model(1.0), rho, VectorField::zeros(g));
  CHECK(max_diff(w[0], [](const Point& x) { return 2 * std::cos(x[0]); }) < 1e-12);
  CHECK(w[1].max_abs() < 1e-12);

  const VectorField back = from_effective(model(1.0), rho, w);
  CHECK(back[0].max_abs() < 1e-12);
}

TEST_CASE("classical right-hand side") {
  const Grid& g = g32();
  const ClassicalRates eq = rhs_original(model(1.0), {one(g), VectorField::zeros(g)});
  CHECK(eq.drho_dt.max_abs() == 0.0);
  CHECK(eq.dmomentum_dt[0].max_abs() == 0.0);

  const ClassicalRates shear =
      rhs_original(model(1.0), {one(g), VectorField({field(g, [](const Point& x) { return std::sin(x[1]); }),
                                                     ScalarField::zeros(g)})});
  CHECK(shear.drho_dt.max_abs() < 1e-13);
  CHECK(max_diff(shear.dmomentum_dt[0], [](const Point& x) { return -std::sin(x[1]); }) < 1e-12);
  CHECK(shear.dmomentum_dt[1].max_abs() < 1e-12);

  for (double gamma : {2.0, 1.4}) {
    const ScalarField rho = field(g, [](const Point& x) { return 1 + 0.1 * std::sin(x[0]); });
    const ClassicalRates r = rhs_original(model(1.0, gamma), {rho, VectorField::zeros(g)});
    CHECK(max_diff(r.dmomentum_dt[0], [gamma](const Point& x) {
            return -0.1 * gamma * std::pow(1 + 0.1 * std::sin(x[0]), gamma - 1) * std::cos(x[0]);
          }) < 1e-12);
    CHECK(r.drho_dt.max_abs() < 1e-13);
  }
}

TEST_CASE("effective right-hand side") {
  const Grid& g = g32();
  const EffectiveRates eq = rhs_effective(model(2.0), one(g), VectorField::zeros(g));
  CHECK(eq.drho_dt.max_abs() == 0.0);
  CHECK(eq.dv_dt[0].max_abs() == 0.0);

  const VectorField v({field(g, [](const Point& x) { return std::sin(x[1]); }), ScalarField::zeros(g)});
  const EffectiveRates r = rhs_effective(model(1.0), one(g), v);
  CHECK(r.drho_dt.max_abs() < 1e-13);
  CHECK(max_diff(r.dv_dt[0], [](const Point& x) { return -std::sin(x[1]); }) < 1e-12);
  CHECK(r.dv_dt[1].max_abs() < 1e-12);
}

TEST_CASE("remainder R") {
  const Grid& g = g32();
  const VectorField rot({field(g, [](const Point& x) { return std::sin(x[1]); }), ScalarField::zeros(g)});
  CHECK(remainder_R(model(1.0), ScalarField::constant(g, 1.3), rot).max_abs() < 1e-14);

  const ScalarField rho = field(g, [](const Point& x) { return 1 + 0.1 * std::sin(x[0]); });
  const VectorField irrot = gradient(field(g, [](const Point& x) { return std::cos(2 * x[0] - x[1]); }));
  CHECK(remainder_R(model(1.0), rho, irrot).max_abs() < 1e-13);

  // curl v = -cos x2 in entry (1,2); only d_1 phi d_2 (curl v)_12 survives
  CHECK(max_diff(remainder_R(model(1.0), rho, rot), [](const Point& x) {
          return -0.1 * std::cos(x[0]) * std::sin(x[1]) / (1 + 0.1 * std::sin(x[0]));
        }) < 1e-12);
  const VectorField shear({ScalarField::zeros(g), field(g, [](const Point& x) { return std::sin(x[0]); })});
  CHECK(remainder_R(model(1.0), rho, shear).max_abs() < 1e-13);
}

TEST_CASE("remainder R1") {
  const Grid& g = g32();
  const VectorField a({field(g, [](const Point& x) { return std::sin(x[1]); }), ScalarField::zeros(g)});
  CHECK(remainder_R1(model(1.0), one(g), a, a).upper()[0].max_abs() < 1e-13);

  const VectorField b({field(g, [](const Point& x) { return std::sin(x[0]); }),
                       field(g, [](const Point& x) { return std::sin(x[0]); })});
  CHECK(max_diff(remainder_R1(model(2.0), one(g), b, b).upper()[0],
                 [](const Point& x) { return std::cos(x[0]) * std::cos(x[0]); }) < 1e-12);
  CHECK(remainder_R1(model(1.0), one(g), VectorField::zeros(g), VectorField::zeros(g)).upper()[0].max_abs() == 0.0);
}

TEST_CASE("decomposed right-hand side") {
  const Grid& g = g32();
  const DecomposedRates z = rhs_decomposed(model(1.0), decompose(one(g), VectorField::zeros(g)));
  CHECK(z.dq_dt.max_abs() == 0.0);
  CHECK(z.ddivv_dt.max_abs() == 0.0);
  CHECK(z.dcurlv_dt.upper()[0].max_abs() == 0.0);

  // consistency with div / curl of the effective rates; smooth data resolved on 64^2
  const Grid g64 = Grid::make(2, 64);
  for (double alpha : {1.0, 2.0, 1.5}) {
    const FluidModel m = model(alpha, 1.4);
    const FieldTriple t = random_triple(g64, 50 + static_cast<std::uint64_t>(alpha * 10), 3.0);
    const ScalarField rho = one(g64) + 0.25 * (t.rho - one(g64));
    const VectorField v = 0.3 * t.v;
    const EffectiveRates e = rhs_effective(m, rho, v);
    const DecomposedRates d = rhs_decomposed(m, decompose(rho, v));
    CHECK(rel(d.dq_dt, e.drho_dt) < 1e-8);
    CHECK(rel(d.ddivv_dt, remove_mean(divergence(e.dv_dt))) < 1e-8);
    CHECK(rel(d.dcurlv_dt.upper()[0], curl_matrix(e.dv_dt).upper()[0]) < 1e-8);
    const auto mv = e.dv_dt.mean();
    for (int j = 0; j < 2; ++j) CHECK(d.dmean_v_dt[static_cast<std::size_t>(j)] == doctest::Approx(mv[static_cast<std::size_t>(j)]).epsilon(1e-8));
  }
}

TEST_CASE("reconstruction from div, curl and mean") {
  const Grid& g = g32();
  const VectorField v({field(g, [](const Point& x) { return std::sin(x[1]); }), ScalarField::zeros(g)});
  const EffectiveState s = decompose(one(g), v);
  const VectorField back = reconstruct_v(s.divv, s.curlv, s.mean_v);
  CHECK(max_diff(back[0], v[0]) < 1e-12);
  CHECK(back[1].max_abs() < 1e-12);

  const VectorField c = reconstruct_v(ScalarField::zeros(g), CurlField::zeros(g), {0.5, -2.0});
  CHECK(max_diff(c[0], ScalarField::constant(g, 0.5)) == 0.0);
  CHECK(max_diff(c[1], ScalarField::constant(g, -2.0)) == 0.0);

  const Grid g3 = Grid::make(3, 16);
  const VectorField w({field(g3, [](const Point& x) { return std::sin(x[1] + x[2]); }),
                       field(g3, [](const Point& x) { return std::cos(x[0] - x[2]); }),
                       field(g3, [](const Point& x) { return std::sin(x[0] + 2 * x[1]); })});
  const CurlField om = curl_matrix(w);
  std::vector<ScalarField> broken(om.upper().begin(), om.upper().end());
  broken[1] = ScalarField::zeros(g3);
  bool threw = false;
  try {
    reconstruct_v(divergence(w), CurlField(g3, broken), {0.0, 0.0, 0.0});
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::IncompatibleCurl;
  }
  CHECK(threw);
  const VectorField w2 = reconstruct_v(divergence(w), om, {0.0, 0.0, 0.0});
  for (int j = 0; j < 3; ++j) CHECK(max_diff(w2[j], w[j]) < 1e-12);
}

TEST_CASE("identity residuals") {
  const Grid& g = g32();
  const IdentityReport z = identity_residuals(model(1.0), one(g), VectorField::zeros(g), VectorField::zeros(g));
  CHECK(z.max_relative() == 0.0);

  const VectorField u({field(g, [](const Point& x) { return std::sin(2 * x[1]); }),
                       field(g, [](const Point& x) { return std::cos(x[0]); })});
  const VectorField v({field(g, [](const Point& x) { return std::cos(x[0] + x[1]); }),
                       field(g, [](const Point& x) { return std::sin(3 * x[0]); })});
  const IdentityReport s = identity_residuals(model(2.0), ScalarField::constant(g, 1.2), u, v);
  for (double a : s.absolute) CHECK(a < 1e-11);

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const FieldTriple t = random_triple(g, 60 + seed, 4.0);
    CHECK(identity_residuals(model(seed % 2 ? 2.0 : 1.0), t.rho, t.u, t.v).max_relative() < 1e-10);
  }
}

TEST_CASE("formulation equivalence") {
  const Grid& g = g32();
  CHECK(equivalence_residual(model(1.0), {one(g), VectorField::zeros(g)}) == 0.0);
  const ScalarField rho = field(g, [](const Point& x) { return 1 + 0.1 * std::sin(x[0]); });
  CHECK(equivalence_residual(model(1.0), {rho, VectorField::zeros(g)}) < 1e-8);
  const Grid g64 = Grid::make(2, 64);
  for (double alpha : {1.0, 2.0}) {
    const FieldTriple t = random_triple(g64, 70, 3.0);
    const ScalarField r = one(g64) + 0.25 * (t.rho - one(g64));
    CHECK(equivalence_residual(model(alpha, 1.4), {r, 0.5 * t.u}) < 1e-8);
  }
}
