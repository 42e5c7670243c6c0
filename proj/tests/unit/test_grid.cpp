#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bdns/error.hpp"
#include "bdns/grid.hpp"
#include "bdns/random.hpp"
#include "support.hpp"

using namespace bdns;
using testing::field;
using testing::max_diff;

namespace {

const Grid& g64() {
  static const Grid g = Grid::make(2, 64);
  return g;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadValue;
}

}  // namespace

TEST_CASE("make_grid contract") {
  const Grid& g = g64();
  CHECK(g.size() == 64 * 64);
  CHECK(g.spectral_size() == 64 * 33);
  CHECK(g.wavenumber_unit() == doctest::Approx(1.0));
  CHECK(g.dealias_limit() == 21);

  int lo = 0, hi = 0;
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    lo = std::min(lo, g.mode(s)[0]);
    hi = std::max(hi, g.mode(s)[0]);
  }
  CHECK(lo == -32);
  CHECK(hi == 31);

  CHECK(Grid::make(3, 32).size() == 32 * 32 * 32);
  CHECK(code_of([] { Grid::make(2, 7); }) == ErrorCode::NonPowerOfTwo);
  CHECK(code_of([] { Grid::make(2, 48); }) == ErrorCode::NonPowerOfTwo);
  CHECK(code_of([] { Grid::make(4, 16); }) == ErrorCode::BadDimension);
}

TEST_CASE("physical-spectral round trip") {
  CounterRng rng(5, 0);
  std::vector<double> v(g64().size());
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  const ScalarField f(g64(), v);
  const ScalarField back = ScalarField::from_spectrum(g64(), f.spectrum());
  CHECK(max_diff(f, back) < 1e-13);

  const Grid g3 = Grid::make(3, 16);
  const ScalarField h = field(g3, [](const Point& x) { return std::sin(x[0] + 2 * x[2]) * std::cos(x[1]); });
  CHECK(max_diff(h, ScalarField::from_spectrum(g3, h.spectrum())) < 1e-13);
}

TEST_CASE("forward transform normalisation puts the mean in the zero mode") {
  const ScalarField f = field(g64(), [](const Point& x) { return 0.7 + std::cos(3 * x[0]); });
  const auto c = f.spectrum();
  CHECK(c[0].real() == doctest::Approx(0.7));
  CHECK(f.mean() == doctest::Approx(0.7));
  CHECK(f.integral() == doctest::Approx(0.7 * 4 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("gradient") {
  const Grid& g = g64();
  const VectorField a = gradient(field(g, [](const Point& x) { return std::sin(x[0]); }));
  CHECK(max_diff(a[0], [](const Point& x) { return std::cos(x[0]); }) < 1e-12);
  CHECK(a[1].max_abs() < 1e-12);

  const VectorField z = gradient(ScalarField::constant(g, 3.0));
  CHECK(z[0].max_abs() == 0.0);
  CHECK(z[1].max_abs() == 0.0);

  const VectorField b = gradient(field(g, [](const Point& x) { return std::sin(x[0]) * std::sin(x[1]); }));
  CHECK(max_diff(b[0], [](const Point& x) { return std::cos(x[0]) * std::sin(x[1]); }) < 1e-12);
  CHECK(max_diff(b[1], [](const Point& x) { return std::sin(x[0]) * std::cos(x[1]); }) < 1e-12);
}

TEST_CASE("divergence") {
  const Grid& g = g64();
  const VectorField w({field(g, [](const Point& x) { return std::sin(x[1]); }),
                       field(g, [](const Point& x) { return std::sin(x[0]); })});
  CHECK(divergence(w).max_abs() < 1e-12);

  const VectorField s({field(g, [](const Point& x) { return std::sin(x[0]); }), ScalarField::zeros(g)});
  CHECK(max_diff(divergence(s), [](const Point& x) { return std::cos(x[0]); }) < 1e-12);

  const ScalarField f = field(g, [](const Point& x) { return std::sin(x[0]) * std::sin(x[1]); });
  CHECK(max_diff(divergence(gradient(f)), [](const Point& x) { return -2 * std::sin(x[0]) * std::sin(x[1]); }) <
        1e-12);
}

TEST_CASE("curl_matrix") {
  const Grid& g = g64();
  const VectorField a({ScalarField::zeros(g), field(g, [](const Point& x) { return std::sin(x[0]); })});
  CHECK(max_diff(curl_matrix(a).at(0, 1), [](const Point& x) { return std::cos(x[0]); }) < 1e-12);
  CHECK(max_diff(curl_matrix(a).at(1, 0), [](const Point& x) { return -std::cos(x[0]); }) < 1e-12);

  const VectorField b({field(g, [](const Point& x) { return std::sin(x[1]); }), ScalarField::zeros(g)});
  CHECK(max_diff(curl_matrix(b).at(0, 1), [](const Point& x) { return -std::cos(x[1]); }) < 1e-12);

  CounterRng rng(9, 1);
  const ScalarField r = random_field(g, rng, [](double k) { return std::exp(-0.3 * k); });
  CHECK(curl_matrix(gradient(r)).upper()[0].max_abs() < 1e-12);
}

TEST_CASE("div_of_curl") {
  const Grid& g = g64();
  const VectorField u({field(g, [](const Point& x) { return std::sin(x[1]); }), ScalarField::zeros(g)});
  const VectorField d = div_of_curl(curl_matrix(u));
  CHECK(max_diff(d[0], [](const Point& x) { return -std::sin(x[1]); }) < 1e-12);
  CHECK(d[1].max_abs() < 1e-12);
  CHECK(div_of_curl(CurlField::zeros(g))[0].max_abs() == 0.0);

  const Grid g3 = Grid::make(3, 16);
  std::vector<ScalarField> comps;
  for (std::uint64_t j = 0; j < 3; ++j) {
    CounterRng rng(21, j);
    comps.push_back(random_field(g3, rng, [](double k) { return k < 5 ? 1.0 : 0.0; }));
  }
  const CurlField w = curl_matrix(VectorField(comps));
  CHECK(divergence(div_of_curl(w)).max_abs() < 1e-11);
  CHECK(cyclic_compatibility_residual(w) < 1e-11);
}

TEST_CASE("laplacian and inverse") {
  const Grid& g = g64();
  const ScalarField s = field(g, [](const Point& x) { return std::sin(x[0]); });
  CHECK(max_diff(laplacian(s), -1.0 * s) < 1e-12);
  CHECK(max_diff(inverse_laplacian(s), -1.0 * s) < 1e-12);
  CHECK(code_of([&] { inverse_laplacian(ScalarField::constant(g, 1.0)); }) == ErrorCode::NonZeroMean);
}

TEST_CASE("two-thirds dealiasing") {
  const Grid& g = g64();
  const ScalarField low = field(g, [](const Point& x) { return std::cos(21 * x[0] + 5 * x[1]); });
  CHECK(max_diff(dealias(low), low) < 1e-13);
  const ScalarField high = field(g, [](const Point& x) { return std::cos(22 * x[0]); });
  CHECK(dealias(high).max_abs() < 1e-13);
  // sin(15x)^2 = (1 - cos 30x)/2 and mode 30 lies above the cutoff
  const ScalarField s = field(g, [](const Point& x) { return std::sin(15 * x[0]); });
  CHECK(max_diff(dealiased_product(s, s), ScalarField::constant(g, 0.5)) < 1e-13);
}

TEST_CASE("field arithmetic and curl storage") {
  const Grid g3 = Grid::make(3, 8);
  CHECK(CurlField::entry_count(3) == 3);
  CHECK(CurlField::upper_index(0, 1, 3) == 0);
  CHECK(CurlField::upper_index(0, 2, 3) == 1);
  CHECK(CurlField::upper_index(1, 2, 3) == 2);
  CHECK(CurlField::upper_index(0, 1, 2) == 0);
  const CurlField z = CurlField::zeros(g3);
  CHECK(z.at(1, 1).max_abs() == 0.0);
  CHECK(code_of([&] { (void)(ScalarField::zeros(g3) + ScalarField::zeros(g64())); }) == ErrorCode::GridMismatch);
}
