#pragma once

// Homogeneous dyadic analysis on the torus. The zero mode belongs to no block;
// it is the mean and is handled separately.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bdns/grid.hpp"

namespace bdns {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Radial profile: 1 on [0, 3/4], 0 on [1, inf), smooth and nonincreasing in between.
double chi(double r);
/// chi(r/2) - chi(r); supported in [3/4, 2], equal to 1 on [1, 3/2].
double phi(double r);

struct BesovSpec {
  double s = 0.0;
  double p = 2.0;
  double r = 1.0;
};

class CutoffFamily {
 public:
  explicit CutoffFamily(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int l_min() const { return l_min_; }
  int l_max() const { return l_max_; }
  int block_count() const { return l_max_ - l_min_ + 1; }
  bool in_range(int l) const { return l >= l_min_ && l <= l_max_; }

  /// phi(2^-l r)
  double block_weight(int l, double radius) const;
  /// chi(2^-m r)
  double low_weight(int m, double radius) const;
  /// Sum of block weights over the resolvable range.
  double partition_sum(double radius) const;

 private:
  Grid grid_;
  int l_min_ = 0;
  int l_max_ = 0;
};

CutoffFamily build_cutoffs(const Grid& grid);

/// Throws ErrorCode::BlockOutOfRange outside [l_min, l_max].
ScalarField dyadic_block(const CutoffFamily& cutoffs, const ScalarField& f, int l);
/// All blocks l_min..l_max, from a single forward transform.
std::vector<ScalarField> dyadic_blocks(const CutoffFamily& cutoffs, const ScalarField& f);
ScalarField low_cutoff(const CutoffFamily& cutoffs, const ScalarField& f, int m);
/// (Id - S_m) f
ScalarField high_part(const CutoffFamily& cutoffs, const ScalarField& f, int m);

/// Lattice L^p norm (p = kInfinity for the max norm).
double lp_norm(const ScalarField& f, double p);
/// L^p norm of the pointwise Euclidean magnitude of a list of components.
double lp_norm(std::span<const ScalarField> components, double p);

/// ||Delta_l f||_p for l = l_min..l_max. Multi-component inputs are localized
/// componentwise and measured through the pointwise Euclidean magnitude.
std::vector<double> block_norms(const CutoffFamily& cutoffs, std::span<const ScalarField> components, double p);
std::vector<double> block_norms(const CutoffFamily& cutoffs, const ScalarField& f, double p);

/// Weighted l^r sum of 2^{ls} * norms[l - l_min].
double besov_from_blocks(const CutoffFamily& cutoffs, std::span<const double> norms, double s, double r);

double besov_norm(const CutoffFamily& cutoffs, const ScalarField& f, const BesovSpec& spec);
double besov_norm(const CutoffFamily& cutoffs, std::span<const ScalarField> components, const BesovSpec& spec);

/// Low blocks (l <= split) weighted 2^{ls} in L^2, high blocks 2^{lt} in L^p, summed.
double hybrid_besov_norm(const CutoffFamily& cutoffs, const ScalarField& f, double s, double t, double p,
                         int split = 0);

/// A history of scalar or multi-component fields.
class TimeSampledField {
 public:
  TimeSampledField() = default;

  void append(double time, std::vector<ScalarField> components);
  void append(double time, const ScalarField& f) { append(time, std::vector<ScalarField>{f}); }
  void append(double time, const VectorField& w);

  std::span<const double> times() const { return times_; }
  std::size_t sample_count() const { return times_.size(); }
  std::span<const ScalarField> sample(std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> times_;
  std::vector<std::vector<ScalarField>> samples_;
};

/// Row i holds the block norms of sample i.
std::vector<std::vector<double>> block_norm_history(const CutoffFamily& cutoffs, const TimeSampledField& h,
                                                    double p);

/// Trapezoid L^sigma norm of a sampled function of time (sigma = kInfinity for the max).
double time_norm(std::span<const double> times, std::span<const double> values, double sigma);

/// Time norm per block, then l^r over blocks. Throws TooFewSamples below two samples.
double chemin_lerner_norm(const CutoffFamily& cutoffs, const TimeSampledField& h, double sigma,
                          const BesovSpec& spec);
/// Besov norm per sample, then the time norm.
double time_besov_norm(const CutoffFamily& cutoffs, const TimeSampledField& h, double sigma, const BesovSpec& spec);

struct BonyParts {
  ScalarField t_fg;
  ScalarField t_gf;
  ScalarField remainder;
};

/// T_f g + T_g f + R(f, g) for mean-free inputs; every product is dealiased.
BonyParts bony_decompose(const CutoffFamily& cutoffs, const ScalarField& f, const ScalarField& g);

struct LogInterpolationReport {
  double lhs = 0.0;
  double rhs_with_C1 = 0.0;
  double ratio = 0.0;
};

/// Throws Degenerate when every norm involved is below 1e-14.
LogInterpolationReport log_interpolation_certificate(const CutoffFamily& cutoffs, const ScalarField& f, double s,
                                                     double epsilon, double p);

/// CSV rows "l,2^l,L2,Lp" with a header line.
std::string spectrum_report(const CutoffFamily& cutoffs, const ScalarField& f, double p);

}  // namespace bdns
