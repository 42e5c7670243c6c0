#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bdns/error.hpp"
#include "bdns/littlewood_paley.hpp"
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

ScalarField random_band(std::uint64_t seed, double kmax) {
  CounterRng rng(seed, 0);
  return random_field(g64(), rng, [kmax](double r) { return r <= kmax ? 1.0 : 0.0; });
}

// Independent lattice L^p norm: midpoint quadrature over the cell volume.
double lp_direct(const ScalarField& f, double p) {
  double acc = 0.0;
  for (double v : f.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.grid().cell_volume(), 1.0 / p);
}

}  // namespace

TEST_CASE("cutoff functions") {
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(0.75) == 1.0);
  CHECK(chi(1.0) == 0.0);
  CHECK(chi(0.875) == doctest::Approx(0.5));
  for (double r : {0.74, 0.8, 0.9, 0.99}) CHECK(chi(r) >= chi(r + 0.005));
  CHECK(phi(0.5) == 0.0);
  CHECK(phi(1.0) == 1.0);
  CHECK(phi(1.5) == 1.0);
  CHECK(phi(2.0) == 0.0);
}

TEST_CASE("partition of unity on the 64^2 lattice") {
  const CutoffFamily c(g64());
  CHECK(c.l_min() == -1);
  CHECK(c.l_max() == 6);
  double sum = 0.0;
  for (int l = c.l_min(); l <= c.l_max(); ++l) sum += c.block_weight(l, 1.0);
  CHECK(std::abs(sum - 1.0) < 1e-12);
  for (int l = c.l_min(); l <= c.l_max(); ++l) CHECK(c.block_weight(l, 0.0) == 0.0);

  CounterRng rng(3, 0);
  const double nyquist = 32.0 * std::sqrt(2.0);
  for (int i = 0; i < 200; ++i) {
    const double r = rng.uniform(1.0, nyquist);
    CHECK(std::abs(c.partition_sum(r) - 1.0) < 1e-12);
  }
}

TEST_CASE("dyadic blocks") {
  const CutoffFamily c(g64());
  const ScalarField f = field(g64(), [](const Point& x) { return std::cos(4 * x[0]); });
  // radius 4 = 2^2 sits where phi(2^-2 r) = 1
  CHECK(max_diff(dyadic_block(c, f, 1) + dyadic_block(c, f, 2), f) < 1e-13);
  for (int l = c.l_min(); l <= c.l_max(); ++l) {
    if (l != 2) CHECK(dyadic_block(c, f, l).max_abs() < 1e-14);
  }
  for (const auto& b : dyadic_blocks(c, ScalarField::constant(g64(), 2.0))) CHECK(b.max_abs() == 0.0);

  const ScalarField r = random_band(11, 30.0) + ScalarField::constant(g64(), 0.3);
  ScalarField sum = ScalarField::zeros(g64());
  for (const auto& b : dyadic_blocks(c, r)) sum += b;
  CHECK(max_diff(sum, remove_mean(r)) < 1e-12 * r.max_abs());

  bool threw = false;
  try {
    dyadic_block(c, f, 40);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::BlockOutOfRange;
  }
  CHECK(threw);
}

TEST_CASE("low-frequency cutoff") {
  const CutoffFamily c(g64());
  const ScalarField f = field(g64(), [](const Point& x) { return std::cos(4 * x[0]); });
  CHECK(max_diff(low_cutoff(c, f, 3), f) < 1e-14);
  const ScalarField r = random_band(12, 30.0) + ScalarField::constant(g64(), 0.25);
  CHECK(max_diff(low_cutoff(c, r, 20), r) < 1e-13);
  CHECK(max_diff(low_cutoff(c, r, -10), ScalarField::constant(g64(), 0.25)) < 1e-13);
  CHECK(max_diff(low_cutoff(c, r, 3) + high_part(c, r, 3), r) < 1e-13);
}

TEST_CASE("Lebesgue and Besov norms") {
  const CutoffFamily c(g64());
  const ScalarField r = random_band(13, 21.0);
  for (double p : {1.0, 2.0, 3.0}) CHECK(lp_norm(r, p) == doctest::Approx(lp_direct(r, p)).epsilon(1e-12));
  CHECK(lp_norm(r, kInfinity) == r.max_abs());
  CHECK(lp_norm(r, 2.0) == doctest::Approx(l2_norm(r)).epsilon(1e-12));

  const ScalarField f = field(g64(), [](const Point& x) { return std::cos(4 * x[0]) * std::cos(0.0 * x[1]); });
  for (double s : {-1.0, 0.0, 1.5}) {
    for (double p : {2.0, 4.0}) {
      CHECK(besov_norm(c, f, {s, p, 1.0}) == doctest::Approx(std::exp2(2 * s) * lp_direct(f, p)).epsilon(1e-12));
    }
  }
  CHECK(besov_norm(c, ScalarField::zeros(g64()), {1.0, 2.0, 1.0}) == 0.0);

  // B^0_{2,inf} <= L^2 <= B^0_{2,1}; the upper bound holds for every p
  for (std::uint64_t k = 0; k < 5; ++k) {
    const ScalarField h = random_band(20 + k, 21.0);
    CHECK(besov_norm(c, h, {0.0, 2.0, kInfinity}) <= lp_norm(h, 2.0) * (1 + 1e-12));
    for (double p : {2.0, 4.0, kInfinity}) CHECK(lp_norm(h, p) <= besov_norm(c, h, {0.0, p, 1.0}) * (1 + 1e-12));
  }

  // the l^r sum over blocks, evaluated directly
  const auto n = block_norms(c, r, 2.0);
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double w = std::exp2(0.5 * (c.l_min() + static_cast<int>(i))) * n[i];
    l1 += w;
    l2 += w * w;
  }
  CHECK(besov_norm(c, r, {0.5, 2.0, 1.0}) == doctest::Approx(l1).epsilon(1e-13));
  CHECK(besov_norm(c, r, {0.5, 2.0, 2.0}) == doctest::Approx(std::sqrt(l2)).epsilon(1e-13));
}

TEST_CASE("hybrid Besov norm") {
  const CutoffFamily c(g64());
  const ScalarField r = random_band(14, 21.0);
  CHECK(hybrid_besov_norm(c, r, 0.7, 0.7, 2.0) == doctest::Approx(besov_norm(c, r, {0.7, 2.0, 1.0})).epsilon(1e-13));
  const ScalarField high = field(g64(), [](const Point& x) { return std::sin(8 * x[1]); });
  CHECK(hybrid_besov_norm(c, high, 0.5, 1.5, 4.0, 0) ==
        doctest::Approx(std::exp2(3 * 1.5) * lp_direct(high, 4.0)).epsilon(1e-12));
  const ScalarField low = field(g64(), [](const Point& x) { return std::sin(x[1]); });
  CHECK(hybrid_besov_norm(c, low, 0.5, 1.5, 4.0, 0) == doctest::Approx(lp_direct(low, 2.0)).epsilon(1e-12));
}

TEST_CASE("time norms and Chemin-Lerner norms") {
  const std::vector<double> t{0.0, 1.0, 3.0};
  const std::vector<double> v{2.0, 2.0, 2.0};
  CHECK(time_norm(t, v, 1.0) == doctest::Approx(6.0));
  CHECK(time_norm(t, v, 2.0) == doctest::Approx(std::sqrt(12.0)));
  CHECK(time_norm(t, v, kInfinity) == 2.0);

  const CutoffFamily c(g64());
  const ScalarField r = random_band(15, 21.0);
  TimeSampledField steady;
  for (int i = 0; i < 4; ++i) steady.append(0.1 * i, r);
  CHECK(chemin_lerner_norm(c, steady, kInfinity, {1.0, 2.0, 1.0}) ==
        doctest::Approx(besov_norm(c, r, {1.0, 2.0, 1.0})).epsilon(1e-13));

  TimeSampledField zero;
  zero.append(0.0, ScalarField::zeros(g64()));
  zero.append(1.0, ScalarField::zeros(g64()));
  CHECK(chemin_lerner_norm(c, zero, 1.0, {0.0, 2.0, 1.0}) == 0.0);

  // single mode |k| = 2^2 decaying at 2 mu |k|^2
  const double mu = 0.5, T = 0.2, k2 = 16.0, s = 1.0;
  const ScalarField f0 = field(g64(), [](const Point& x) { return std::cos(4 * x[0]); });
  TimeSampledField heat;
  const int samples = 4001;
  for (int i = 0; i < samples; ++i) {
    const double time = T * i / (samples - 1);
    heat.append(time, std::exp(-2 * mu * k2 * time) * f0);
  }
  const double exact = std::exp2(2 * s) * (1 - std::exp(-2 * mu * k2 * T)) / (2 * mu * k2) * lp_direct(f0, 2.0);
  CHECK(chemin_lerner_norm(c, heat, 1.0, {s, 2.0, 1.0}) == doctest::Approx(exact).epsilon(1e-6));

  TimeSampledField one;
  one.append(0.0, r);
  CHECK_THROWS_AS(chemin_lerner_norm(c, one, 1.0, {0.0, 2.0, 1.0}), Error);
  CHECK_THROWS_AS(one.append(0.0, r), Error);
}

TEST_CASE("Bony decomposition") {
  const CutoffFamily c(g64());
  const ScalarField lo = field(g64(), [](const Point& x) { return std::cos(x[0]); });
  const ScalarField hi = field(g64(), [](const Point& x) { return std::sin(16 * x[1]); });
  const BonyParts sep = bony_decompose(c, lo, hi);
  CHECK(sep.remainder.max_abs() < 1e-14);
  CHECK(sep.t_gf.max_abs() < 1e-14);
  CHECK(max_diff(sep.t_fg, dealiased_product(lo, hi)) < 1e-13);

  const ScalarField b = field(g64(), [](const Point& x) { return std::cos(4 * x[0]) + std::sin(4 * x[1]); });
  const BonyParts same = bony_decompose(c, b, b);
  CHECK(same.t_fg.max_abs() < 1e-14);
  CHECK(same.t_gf.max_abs() < 1e-14);
  CHECK(max_diff(same.remainder, dealiased_product(b, b) - ScalarField::constant(g64(), 0.0)) < 1e-13);

  const BonyParts z = bony_decompose(c, ScalarField::zeros(g64()), b);
  CHECK(z.t_fg.max_abs() == 0.0);
  CHECK(z.t_gf.max_abs() == 0.0);
  CHECK(z.remainder.max_abs() == 0.0);

  const ScalarField f = random_band(16, 21.0), g = random_band(17, 21.0);
  const BonyParts p = bony_decompose(c, f, g);
  const ScalarField fg = dealiased_product(f, g);
  CHECK(max_diff(p.t_fg + p.t_gf + p.remainder, fg) < 1e-11 * fg.max_abs());
}

TEST_CASE("logarithmic interpolation certificate") {
  const CutoffFamily c(g64());
  CHECK_THROWS_AS(log_interpolation_certificate(c, ScalarField::zeros(g64()), 1.0, 0.5, 2.0), Error);

  const ScalarField f = field(g64(), [](const Point& x) { return std::cos(4 * x[0]); });
  const double s = 1.0, eps = 0.5;
  const LogInterpolationReport rep = log_interpolation_certificate(c, f, s, eps, 2.0);
  const double expected = eps / (1 + eps) / std::log(std::numbers::e + std::exp2(-2 * eps) + std::exp2(2 * eps));
  CHECK(rep.ratio == doctest::Approx(expected).epsilon(1e-12));

  const LogInterpolationReport many = log_interpolation_certificate(c, random_band(18, 21.0), 1.0, 0.25, 2.0);
  CHECK(std::isfinite(many.ratio));
  CHECK(many.ratio > 0.0);
}

TEST_CASE("spectrum report") {
  const CutoffFamily c(g64());
  const std::string csv = spectrum_report(c, random_band(19, 21.0), 4.0);
  CHECK(csv.rfind("l,2^l,L2,Lp\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == c.block_count() + 1);
}
