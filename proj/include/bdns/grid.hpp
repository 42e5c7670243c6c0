#pragma once

// Periodic torus discretization and exact spectral differential operators.
//
// Physical samples are stored row-major (last axis fastest). The spectral
// mirror uses the real-to-complex half layout: every axis but the last runs
// over all n integer wavenumbers, the last over 0..n/2. Transforms are
// normalized so that the zero-mode coefficient equals the mean of the field.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace bdns {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;

class Grid {
 public:
  /// Throws ErrorCode::BadDimension for dim outside {2,3} and
  /// ErrorCode::NonPowerOfTwo unless points_per_axis is a power of two >= 8.
  static Grid make(int dim, int points_per_axis, double length = 2.0 * std::numbers::pi);

  int dim() const;
  int points_per_axis() const;
  double length() const;

  std::size_t size() const;
  std::size_t spectral_size() const;

  double spacing() const;
  double cell_volume() const;
  double volume() const;
  /// 2π / length: the physical wavenumber of lattice index 1.
  double wavenumber_unit() const;
  /// Largest |k_j| (in lattice units) kept by the two-thirds rule.
  int dealias_limit() const;

  /// Integer wave vector of a spectral slot (unused axes are zero).
  const std::array<int, 3>& mode(std::size_t slot) const;
  /// Physical wavenumber along an axis used by first derivatives; zero on the
  /// Nyquist plane of that axis so odd derivatives stay real.
  double derivative_wavenumber(std::size_t slot, int axis) const;
  /// Physical |k|^2 (Nyquist included).
  double k_squared(std::size_t slot) const;
  double radius(std::size_t slot) const;
  bool is_dealiased_out(std::size_t slot) const;

  Point point(std::size_t flat_index) const;

  void forward(std::span<const double> values, std::span<Complex> coeffs) const;
  void backward(std::span<const Complex> coeffs, std::span<double> values) const;

  bool operator==(const Grid& other) const;

 private:
  struct Impl;
  explicit Grid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values);

  static ScalarField zeros(const Grid& grid);
  static ScalarField constant(const Grid& grid, double value);
  static ScalarField from_function(const Grid& grid, const std::function<double(const Point&)>& fn);
  static ScalarField from_spectrum(const Grid& grid, std::span<const Complex> coeffs);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  std::vector<Complex> spectrum() const;

  double mean() const;
  double min() const;
  double max() const;
  double max_abs() const;
  double integral() const;

  ScalarField map(const std::function<double(double)>& fn) const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product, no dealiasing.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);

  static VectorField zeros(const Grid& grid);
  static VectorField constant(const Grid& grid, std::span<const double> value);

  const Grid& grid() const { return components_.front().grid(); }
  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarField& operator[](int j) const { return components_[static_cast<std::size_t>(j)]; }
  std::span<const ScalarField> components() const { return components_; }

  std::vector<double> mean() const;
  /// Pointwise Euclidean magnitude.
  ScalarField magnitude() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);

 private:
  std::vector<ScalarField> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);

/// Antisymmetric dim x dim matrix field; only the strictly upper entries are
/// stored, ordered (0,1), (0,2), (1,2).
class CurlField {
 public:
  CurlField(Grid grid, std::vector<ScalarField> upper);

  static CurlField zeros(const Grid& grid);
  static std::size_t entry_count(int dim) { return static_cast<std::size_t>(dim * (dim - 1) / 2); }
  static std::size_t upper_index(int i, int j, int dim);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  std::span<const ScalarField> upper() const { return upper_; }
  /// Entry (i,j); negated for i > j, zero on the diagonal.
  ScalarField at(int i, int j) const;

  CurlField& operator+=(const CurlField& other);
  CurlField& operator-=(const CurlField& other);

 private:
  Grid grid_;
  std::vector<ScalarField> upper_;
};

CurlField operator+(CurlField a, const CurlField& b);
CurlField operator-(CurlField a, const CurlField& b);
CurlField operator*(double s, const CurlField& a);

// Spectral operators. All are exact mode-wise multiplications.

ScalarField apply_multiplier(const ScalarField& f, const std::function<double(std::size_t slot)>& symbol);
ScalarField partial(const ScalarField& f, int axis);
ScalarField partial2(const ScalarField& f, int axis_a, int axis_b);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& w);
CurlField curl_matrix(const VectorField& w);
/// Component j = sum_i d_i omega_ij.
VectorField div_of_curl(const CurlField& omega);
ScalarField laplacian(const ScalarField& f);
/// Throws ErrorCode::NonZeroMean when |mean| > 1e-12 * max|f|; zero mode maps to zero.
ScalarField inverse_laplacian(const ScalarField& f);
/// Two-thirds rule: zero every mode with some |k_j| > n/3.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& w);
/// dealias(a * b)
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);
/// Removes the zero mode.
ScalarField remove_mean(const ScalarField& f);

double inner(const ScalarField& a, const ScalarField& b);
double l2_norm(const ScalarField& f);
double l2_norm(std::span<const ScalarField> components);

/// Residual of d_i w_jk + d_j w_ki + d_k w_ij (zero for any curl of a vector
/// field); L2 norm, identically zero in 2D.
double cyclic_compatibility_residual(const CurlField& omega);

}  // namespace bdns
