#include "bdns/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bdns/error.hpp"
#include "bdns/text.hpp"

namespace bdns {

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double parseval_weight(const Grid& g, std::size_t slot) {
  const int last = g.mode(slot)[static_cast<std::size_t>(g.dim() - 1)];
  return (last == 0 || last == g.points_per_axis() / 2) ? 1.0 : 2.0;
}

double sum_power(std::span<const double> values, double p) {
  double acc = 0.0;
  for (double x : values) acc += std::pow(std::abs(x), p);
  return acc;
}

void check_exponent(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadValue, "exponent must lie in [1, inf]");
}

}  // namespace

double chi(double r) {
  if (r <= 0.75) return 1.0;
  if (r >= 1.0) return 0.0;
  const double t = (r - 0.75) / 0.25;
  const double a = bump(1.0 - t);
  const double b = bump(t);
  return a / (a + b);
}

double phi(double r) { return chi(0.5 * r) - chi(r); }

CutoffFamily::CutoffFamily(const Grid& grid) : grid_(grid) {
  const double r_min = grid.wavenumber_unit();
  const double r_max = std::sqrt(static_cast<double>(grid.dim())) * (grid.points_per_axis() / 2) * r_min;
  // chi(2^-l_min r_min) = 0 and chi(2^-(l_max+1) r_max) = 1, with a block of margin each side.
  l_min_ = static_cast<int>(std::floor(std::log2(r_min))) - 1;
  l_max_ = static_cast<int>(std::ceil(std::log2(4.0 * r_max / 3.0)));
}

double CutoffFamily::block_weight(int l, double radius) const { return phi(std::ldexp(radius, -l)); }
double CutoffFamily::low_weight(int m, double radius) const { return chi(std::ldexp(radius, -m)); }

double CutoffFamily::partition_sum(double radius) const {
  double acc = 0.0;
  for (int l = l_min_; l <= l_max_; ++l) acc += block_weight(l, radius);
  return acc;
}

CutoffFamily build_cutoffs(const Grid& grid) { return CutoffFamily(grid); }

namespace {

ScalarField block_from_spectrum(const CutoffFamily& cutoffs, std::span<const Complex> c, int l) {
  const Grid& g = cutoffs.grid();
  std::vector<Complex> b(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) b[s] = cutoffs.block_weight(l, g.radius(s)) * c[s];
  return ScalarField::from_spectrum(g, b);
}

}  // namespace

ScalarField dyadic_block(const CutoffFamily& cutoffs, const ScalarField& f, int l) {
  if (!cutoffs.in_range(l)) {
    throw Error(ErrorCode::BlockOutOfRange, "block " + std::to_string(l) + " outside [" +
                                                std::to_string(cutoffs.l_min()) + ", " +
                                                std::to_string(cutoffs.l_max()) + "]");
  }
  return block_from_spectrum(cutoffs, f.spectrum(), l);
}

std::vector<ScalarField> dyadic_blocks(const CutoffFamily& cutoffs, const ScalarField& f) {
  const auto c = f.spectrum();
  std::vector<ScalarField> out;
  for (int l = cutoffs.l_min(); l <= cutoffs.l_max(); ++l) out.push_back(block_from_spectrum(cutoffs, c, l));
  return out;
}

ScalarField low_cutoff(const CutoffFamily& cutoffs, const ScalarField& f, int m) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](std::size_t s) { return cutoffs.low_weight(m, g.radius(s)); });
}

ScalarField high_part(const CutoffFamily& cutoffs, const ScalarField& f, int m) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](std::size_t s) { return 1.0 - cutoffs.low_weight(m, g.radius(s)); });
}

double lp_norm(const ScalarField& f, double p) {
  check_exponent(p);
  if (std::isinf(p)) return f.max_abs();
  return std::pow(sum_power(f.values(), p) * f.grid().cell_volume(), 1.0 / p);
}

double lp_norm(std::span<const ScalarField> components, double p) {
  if (components.size() == 1) return lp_norm(components.front(), p);
  std::vector<double> mag(components.front().size(), 0.0);
  for (const auto& c : components) {
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += c[i] * c[i];
  }
  for (double& x : mag) x = std::sqrt(x);
  return lp_norm(ScalarField(components.front().grid(), std::move(mag)), p);
}

std::vector<double> block_norms(const CutoffFamily& cutoffs, std::span<const ScalarField> components, double p) {
  check_exponent(p);
  const Grid& g = cutoffs.grid();
  std::vector<std::vector<Complex>> spectra;
  for (const auto& c : components) spectra.push_back(c.spectrum());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cutoffs.block_count()));

  if (p == 2.0) {
    // Parseval on the half spectrum.
    for (int l = cutoffs.l_min(); l <= cutoffs.l_max(); ++l) {
      double acc = 0.0;
      for (const auto& c : spectra) {
        for (std::size_t s = 0; s < c.size(); ++s) {
          const double w = cutoffs.block_weight(l, g.radius(s));
          if (w != 0.0) acc += parseval_weight(g, s) * w * w * std::norm(c[s]);
        }
      }
      out.push_back(std::sqrt(acc * g.volume()));
    }
    return out;
  }

  for (int l = cutoffs.l_min(); l <= cutoffs.l_max(); ++l) {
    std::vector<ScalarField> localized;
    for (const auto& c : spectra) localized.push_back(block_from_spectrum(cutoffs, c, l));
    out.push_back(lp_norm(localized, p));
  }
  return out;
}

std::vector<double> block_norms(const CutoffFamily& cutoffs, const ScalarField& f, double p) {
  return block_norms(cutoffs, std::span<const ScalarField>(&f, 1), p);
}

double besov_from_blocks(const CutoffFamily& cutoffs, std::span<const double> norms, double s, double r) {
  check_exponent(r);
  double acc = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const int l = cutoffs.l_min() + static_cast<int>(i);
    const double term = std::exp2(l * s) * norms[i];
    if (std::isinf(r)) {
      acc = std::max(acc, term);
    } else {
      acc += std::pow(term, r);
    }
  }
  return std::isinf(r) ? acc : std::pow(acc, 1.0 / r);
}

double besov_norm(const CutoffFamily& cutoffs, const ScalarField& f, const BesovSpec& spec) {
  const auto n = block_norms(cutoffs, f, spec.p);
  return besov_from_blocks(cutoffs, n, spec.s, spec.r);
}

double besov_norm(const CutoffFamily& cutoffs, std::span<const ScalarField> components, const BesovSpec& spec) {
  const auto n = block_norms(cutoffs, components, spec.p);
  return besov_from_blocks(cutoffs, n, spec.s, spec.r);
}

double hybrid_besov_norm(const CutoffFamily& cutoffs, const ScalarField& f, double s, double t, double p,
                         int split) {
  const auto low = block_norms(cutoffs, f, 2.0);
  const auto high = p == 2.0 ? low : block_norms(cutoffs, f, p);
  double acc = 0.0;
  for (std::size_t i = 0; i < low.size(); ++i) {
    const int l = cutoffs.l_min() + static_cast<int>(i);
    acc += l <= split ? std::exp2(l * s) * low[i] : std::exp2(l * t) * high[i];
  }
  return acc;
}

// ---------------------------------------------------------------- time histories

void TimeSampledField::append(double time, std::vector<ScalarField> components) {
  if (components.empty()) throw Error(ErrorCode::BadValue, "empty sample");
  if (!times_.empty()) {
    if (!(time > times_.back())) throw Error(ErrorCode::BadValue, "sample times must increase strictly");
    if (!(components.front().grid() == samples_.front().front().grid()) ||
        components.size() != samples_.front().size()) {
      throw Error(ErrorCode::GridMismatch, "samples must share one grid and shape");
    }
  }
  times_.push_back(time);
  samples_.push_back(std::move(components));
}

void TimeSampledField::append(double time, const VectorField& w) {
  append(time, std::vector<ScalarField>(w.components().begin(), w.components().end()));
}

std::vector<std::vector<double>> block_norm_history(const CutoffFamily& cutoffs, const TimeSampledField& h,
                                                    double p) {
  std::vector<std::vector<double>> rows;
  rows.reserve(h.sample_count());
  for (std::size_t i = 0; i < h.sample_count(); ++i) rows.push_back(block_norms(cutoffs, h.sample(i), p));
  return rows;
}

double time_norm(std::span<const double> times, std::span<const double> values, double sigma) {
  check_exponent(sigma);
  if (std::isinf(sigma)) {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    acc += 0.5 * (times[i] - times[i - 1]) *
           (std::pow(std::abs(values[i - 1]), sigma) + std::pow(std::abs(values[i]), sigma));
  }
  return std::pow(acc, 1.0 / sigma);
}

namespace {

void require_history(const TimeSampledField& h) {
  if (h.sample_count() < 2) throw Error(ErrorCode::TooFewSamples, "time norms need at least two samples");
}

}  // namespace

double chemin_lerner_norm(const CutoffFamily& cutoffs, const TimeSampledField& h, double sigma,
                          const BesovSpec& spec) {
  require_history(h);
  const auto rows = block_norm_history(cutoffs, h, spec.p);
  std::vector<double> per_block(static_cast<std::size_t>(cutoffs.block_count()));
  std::vector<double> series(rows.size());
  for (std::size_t b = 0; b < per_block.size(); ++b) {
    for (std::size_t i = 0; i < rows.size(); ++i) series[i] = rows[i][b];
    per_block[b] = time_norm(h.times(), series, sigma);
  }
  return besov_from_blocks(cutoffs, per_block, spec.s, spec.r);
}

double time_besov_norm(const CutoffFamily& cutoffs, const TimeSampledField& h, double sigma, const BesovSpec& spec) {
  require_history(h);
  const auto rows = block_norm_history(cutoffs, h, spec.p);
  std::vector<double> series;
  for (const auto& row : rows) series.push_back(besov_from_blocks(cutoffs, row, spec.s, spec.r));
  return time_norm(h.times(), series, sigma);
}

// ---------------------------------------------------------------- Bony

BonyParts bony_decompose(const CutoffFamily& cutoffs, const ScalarField& f, const ScalarField& g) {
  const Grid& grid = f.grid();
  const auto fb = dyadic_blocks(cutoffs, f);
  const auto gb = dyadic_blocks(cutoffs, g);
  const auto fc = f.spectrum();
  const auto gc = g.spectrum();

  auto low_from = [&](std::span<const Complex> c, int m) {
    std::vector<Complex> out(c.size());
    for (std::size_t s = 0; s < c.size(); ++s) {
      // The mean is not part of the homogeneous low cutoff.
      out[s] = s == 0 ? Complex(0.0, 0.0) : cutoffs.low_weight(m, grid.radius(s)) * c[s];
    }
    return ScalarField::from_spectrum(grid, out);
  };

  ScalarField t_fg = ScalarField::zeros(grid);
  ScalarField t_gf = ScalarField::zeros(grid);
  ScalarField rem = ScalarField::zeros(grid);
  const auto count = fb.size();
  for (std::size_t i = 0; i < count; ++i) {
    const int l = cutoffs.l_min() + static_cast<int>(i);
    t_fg += low_from(fc, l - 1) * gb[i];
    t_gf += low_from(gc, l - 1) * fb[i];
    for (std::size_t j = (i == 0 ? 0 : i - 1); j <= std::min(count - 1, i + 1); ++j) rem += fb[i] * gb[j];
  }
  return {dealias(t_fg), dealias(t_gf), dealias(rem)};
}

LogInterpolationReport log_interpolation_certificate(const CutoffFamily& cutoffs, const ScalarField& f, double s,
                                                     double epsilon, double p) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::BadValue, "epsilon must be positive");
  const auto n = block_norms(cutoffs, f, p);
  const double b1 = besov_from_blocks(cutoffs, n, s, 1.0);
  const double binf = besov_from_blocks(cutoffs, n, s, kInfinity);
  const double bminus = besov_from_blocks(cutoffs, n, s - epsilon, kInfinity);
  const double bplus = besov_from_blocks(cutoffs, n, s + epsilon, kInfinity);
  if (std::max({b1, binf, bminus, bplus}) < 1e-14 || binf == 0.0) {
    throw Error(ErrorCode::Degenerate, "field has no dyadic content");
  }
  LogInterpolationReport rep;
  rep.lhs = b1;
  rep.rhs_with_C1 = (1.0 + epsilon) / epsilon * binf * std::log(std::numbers::e + (bminus + bplus) / binf);
  rep.ratio = rep.lhs / rep.rhs_with_C1;
  return rep;
}

std::string spectrum_report(const CutoffFamily& cutoffs, const ScalarField& f, double p) {
  const auto l2 = block_norms(cutoffs, f, 2.0);
  const auto lp = p == 2.0 ? l2 : block_norms(cutoffs, f, p);
  std::ostringstream out;
  out << "l,2^l,L2,Lp\n";
  for (std::size_t i = 0; i < l2.size(); ++i) {
    const int l = cutoffs.l_min() + static_cast<int>(i);
    out << l << ',' << to_text(std::exp2(l)) << ',' << to_text(l2[i]) << ',' << to_text(lp[i]) << '\n';
  }
  return out.str();
}

}  // namespace bdns
