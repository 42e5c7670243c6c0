#include "bdns/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "bdns/error.hpp"

namespace bdns {

namespace {

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Grid::Impl {
  int dim = 0;
  int n = 0;
  double length = 0.0;
  std::size_t size = 0;
  std::size_t spectral_size = 0;
  std::vector<std::array<int, 3>> modes;
  std::vector<std::array<double, 3>> deriv_k;
  std::vector<double> ksq;
  std::vector<char> dealias_out;
  fftw_plan forward_plan = nullptr;
  fftw_plan backward_plan = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan) fftw_destroy_plan(forward_plan);
    if (backward_plan) fftw_destroy_plan(backward_plan);
  }
};

Grid Grid::make(int dim, int points_per_axis, double length) {
  if (dim != 2 && dim != 3) {
    throw Error(ErrorCode::BadDimension, "dim must be 2 or 3, got " + std::to_string(dim));
  }
  const bool pow2 = points_per_axis > 0 && (points_per_axis & (points_per_axis - 1)) == 0;
  if (!pow2 || points_per_axis < 8) {
    throw Error(ErrorCode::NonPowerOfTwo,
                "points_per_axis must be a power of two >= 8, got " + std::to_string(points_per_axis));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::BadValue, "length must be positive");
  }

  auto impl = std::make_shared<Impl>();
  const int n = points_per_axis;
  impl->dim = dim;
  impl->n = n;
  impl->length = length;
  impl->size = 1;
  for (int a = 0; a < dim; ++a) impl->size *= static_cast<std::size_t>(n);
  const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
  impl->spectral_size = impl->size / static_cast<std::size_t>(n) * half;

  const double unit = 2.0 * std::numbers::pi / length;
  const int limit = n / 3;
  impl->modes.resize(impl->spectral_size);
  impl->deriv_k.resize(impl->spectral_size);
  impl->ksq.resize(impl->spectral_size);
  impl->dealias_out.resize(impl->spectral_size);

  for (std::size_t slot = 0; slot < impl->spectral_size; ++slot) {
    std::array<int, 3> k{0, 0, 0};
    std::size_t rest = slot;
    const int last = static_cast<int>(rest % half);
    rest /= half;
    k[static_cast<std::size_t>(dim - 1)] = last;
    for (int a = dim - 2; a >= 0; --a) {
      const int idx = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
      k[static_cast<std::size_t>(a)] = idx < n / 2 ? idx : idx - n;
    }
    std::array<double, 3> dk{0.0, 0.0, 0.0};
    double k2 = 0.0;
    bool out = false;
    for (int a = 0; a < dim; ++a) {
      const int ka = k[static_cast<std::size_t>(a)];
      const bool nyquist = std::abs(ka) == n / 2;
      dk[static_cast<std::size_t>(a)] = nyquist ? 0.0 : unit * ka;
      k2 += (unit * ka) * (unit * ka);
      out = out || std::abs(ka) > limit;
    }
    impl->modes[slot] = k;
    impl->deriv_k[slot] = dk;
    impl->ksq[slot] = k2;
    impl->dealias_out[slot] = out ? 1 : 0;
  }

  std::array<int, 3> dims{n, n, n};
  std::vector<double> real_buf(impl->size);
  std::vector<Complex> complex_buf(impl->spectral_size);
  {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    impl->forward_plan = fftw_plan_dft_r2c(dim, dims.data(), real_buf.data(),
                                           reinterpret_cast<fftw_complex*>(complex_buf.data()), flags);
    impl->backward_plan = fftw_plan_dft_c2r(dim, dims.data(), reinterpret_cast<fftw_complex*>(complex_buf.data()),
                                            real_buf.data(), flags);
  }
  return Grid(std::move(impl));
}

int Grid::dim() const { return impl_->dim; }
int Grid::points_per_axis() const { return impl_->n; }
double Grid::length() const { return impl_->length; }
std::size_t Grid::size() const { return impl_->size; }
std::size_t Grid::spectral_size() const { return impl_->spectral_size; }
double Grid::spacing() const { return impl_->length / impl_->n; }
double Grid::cell_volume() const { return std::pow(spacing(), impl_->dim); }
double Grid::volume() const { return std::pow(impl_->length, impl_->dim); }
double Grid::wavenumber_unit() const { return 2.0 * std::numbers::pi / impl_->length; }
int Grid::dealias_limit() const { return impl_->n / 3; }

const std::array<int, 3>& Grid::mode(std::size_t slot) const { return impl_->modes[slot]; }
double Grid::derivative_wavenumber(std::size_t slot, int axis) const {
  return impl_->deriv_k[slot][static_cast<std::size_t>(axis)];
}
double Grid::k_squared(std::size_t slot) const { return impl_->ksq[slot]; }
double Grid::radius(std::size_t slot) const { return std::sqrt(impl_->ksq[slot]); }
bool Grid::is_dealiased_out(std::size_t slot) const { return impl_->dealias_out[slot] != 0; }

Point Grid::point(std::size_t flat_index) const {
  Point x{0.0, 0.0, 0.0};
  const auto n = static_cast<std::size_t>(impl_->n);
  const double h = spacing();
  for (int a = impl_->dim - 1; a >= 0; --a) {
    x[static_cast<std::size_t>(a)] = h * static_cast<double>(flat_index % n);
    flat_index /= n;
  }
  return x;
}

void Grid::forward(std::span<const double> values, std::span<Complex> coeffs) const {
  fftw_execute_dft_r2c(impl_->forward_plan, const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(coeffs.data()));
  const double scale = 1.0 / static_cast<double>(impl_->size);
  for (auto& c : coeffs) c *= scale;
}

void Grid::backward(std::span<const Complex> coeffs, std::span<double> values) const {
  // c2r overwrites its input.
  std::vector<Complex> scratch(coeffs.begin(), coeffs.end());
  fftw_execute_dft_c2r(impl_->backward_plan, reinterpret_cast<fftw_complex*>(scratch.data()), values.data());
}

bool Grid::operator==(const Grid& other) const {
  return impl_ == other.impl_ ||
         (impl_->dim == other.impl_->dim && impl_->n == other.impl_->n && impl_->length == other.impl_->length);
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

}  // namespace

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::GridMismatch, "sample count does not match grid");
  }
}

ScalarField ScalarField::zeros(const Grid& grid) { return ScalarField(grid, std::vector<double>(grid.size(), 0.0)); }

ScalarField ScalarField::constant(const Grid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

ScalarField ScalarField::from_function(const Grid& grid, const std::function<double(const Point&)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
  return ScalarField(grid, std::move(v));
}

ScalarField ScalarField::from_spectrum(const Grid& grid, std::span<const Complex> coeffs) {
  std::vector<double> v(grid.size());
  grid.backward(coeffs, v);
  return ScalarField(grid, std::move(v));
}

std::vector<Complex> ScalarField::spectrum() const {
  std::vector<Complex> c(grid_.spectral_size());
  grid_.forward(values_, c);
  return c;
}

double ScalarField::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}
double ScalarField::integral() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) * grid_.cell_volume();
}

ScalarField ScalarField::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), fn);
  return ScalarField(grid_, std::move(v));
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}
ScalarField& ScalarField::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator-(const ScalarField& a) { return -1.0 * a; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return ScalarField(a.grid(), std::move(v));
}

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::GridMismatch, "vector field needs components");
  const Grid& g = components_.front().grid();
  if (static_cast<int>(components_.size()) != g.dim()) {
    throw Error(ErrorCode::GridMismatch, "component count must equal grid dimension");
  }
  for (const auto& c : components_) require_same_grid(g, c.grid());
}

VectorField VectorField::zeros(const Grid& grid) {
  return VectorField(std::vector<ScalarField>(static_cast<std::size_t>(grid.dim()), ScalarField::zeros(grid)));
}

VectorField VectorField::constant(const Grid& grid, std::span<const double> value) {
  std::vector<ScalarField> c;
  for (int j = 0; j < grid.dim(); ++j) c.push_back(ScalarField::constant(grid, value[static_cast<std::size_t>(j)]));
  return VectorField(std::move(c));
}

std::vector<double> VectorField::mean() const {
  std::vector<double> m;
  for (const auto& c : components_) m.push_back(c.mean());
  return m;
}

ScalarField VectorField::magnitude() const {
  std::vector<double> v(grid().size(), 0.0);
  for (const auto& c : components_) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[i] * c[i];
  }
  for (double& x : v) x = std::sqrt(x);
  return ScalarField(grid(), std::move(v));
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (std::size_t j = 0; j < components_.size(); ++j) components_[j] += other.components_[j];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& other) {
  for (std::size_t j = 0; j < components_.size(); ++j) components_[j] -= other.components_[j];
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, const VectorField& a) {
  std::vector<ScalarField> c;
  for (const auto& x : a.components()) c.push_back(s * x);
  return VectorField(std::move(c));
}

// ---------------------------------------------------------------- CurlField

CurlField::CurlField(Grid grid, std::vector<ScalarField> upper) : grid_(std::move(grid)), upper_(std::move(upper)) {
  if (upper_.size() != entry_count(grid_.dim())) {
    throw Error(ErrorCode::GridMismatch, "curl field needs dim*(dim-1)/2 entries");
  }
  for (const auto& e : upper_) require_same_grid(grid_, e.grid());
}

CurlField CurlField::zeros(const Grid& grid) {
  return CurlField(grid, std::vector<ScalarField>(entry_count(grid.dim()), ScalarField::zeros(grid)));
}

std::size_t CurlField::upper_index(int i, int j, int dim) {
  // (0,1)->0, (0,2)->1, (1,2)->2
  if (dim == 2) return 0;
  return static_cast<std::size_t>(i + j - 1);
}

ScalarField CurlField::at(int i, int j) const {
  if (i == j) return ScalarField::zeros(grid_);
  if (i < j) return upper_[upper_index(i, j, grid_.dim())];
  return -upper_[upper_index(j, i, grid_.dim())];
}

CurlField& CurlField::operator+=(const CurlField& other) {
  for (std::size_t e = 0; e < upper_.size(); ++e) upper_[e] += other.upper_[e];
  return *this;
}
CurlField& CurlField::operator-=(const CurlField& other) {
  for (std::size_t e = 0; e < upper_.size(); ++e) upper_[e] -= other.upper_[e];
  return *this;
}

CurlField operator+(CurlField a, const CurlField& b) { return a += b; }
CurlField operator-(CurlField a, const CurlField& b) { return a -= b; }
CurlField operator*(double s, const CurlField& a) {
  std::vector<ScalarField> e;
  for (const auto& x : a.upper()) e.push_back(s * x);
  return CurlField(a.grid(), std::move(e));
}

// ---------------------------------------------------------------- operators

namespace {

template <typename Symbol>
ScalarField multiply_spectrum(const ScalarField& f, Symbol&& symbol) {
  const Grid& g = f.grid();
  auto c = f.spectrum();
  for (std::size_t s = 0; s < c.size(); ++s) c[s] *= symbol(s);
  return ScalarField::from_spectrum(g, c);
}

}  // namespace

ScalarField apply_multiplier(const ScalarField& f, const std::function<double(std::size_t)>& symbol) {
  return multiply_spectrum(f, [&](std::size_t s) { return symbol(s); });
}

ScalarField partial(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  return multiply_spectrum(f, [&](std::size_t s) { return Complex(0.0, g.derivative_wavenumber(s, axis)); });
}

ScalarField partial2(const ScalarField& f, int a, int b) {
  const Grid& g = f.grid();
  return multiply_spectrum(
      f, [&](std::size_t s) { return -g.derivative_wavenumber(s, a) * g.derivative_wavenumber(s, b); });
}

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  const auto c = f.spectrum();
  std::vector<ScalarField> comps;
  std::vector<Complex> d(c.size());
  for (int a = 0; a < g.dim(); ++a) {
    for (std::size_t s = 0; s < c.size(); ++s) d[s] = Complex(0.0, g.derivative_wavenumber(s, a)) * c[s];
    comps.push_back(ScalarField::from_spectrum(g, d));
  }
  return VectorField(std::move(comps));
}

ScalarField divergence(const VectorField& w) {
  const Grid& g = w.grid();
  std::vector<Complex> acc(g.spectral_size(), Complex(0.0, 0.0));
  for (int a = 0; a < w.dim(); ++a) {
    const auto c = w[a].spectrum();
    for (std::size_t s = 0; s < c.size(); ++s) acc[s] += Complex(0.0, g.derivative_wavenumber(s, a)) * c[s];
  }
  return ScalarField::from_spectrum(g, acc);
}

CurlField curl_matrix(const VectorField& w) {
  const Grid& g = w.grid();
  const int dim = w.dim();
  std::vector<std::vector<Complex>> spec;
  for (int a = 0; a < dim; ++a) spec.push_back(w[a].spectrum());
  std::vector<ScalarField> upper;
  std::vector<Complex> e(g.spectral_size());
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const auto& wi = spec[static_cast<std::size_t>(i)];
      const auto& wj = spec[static_cast<std::size_t>(j)];
      for (std::size_t s = 0; s < e.size(); ++s) {
        e[s] = Complex(0.0, g.derivative_wavenumber(s, i)) * wj[s] - Complex(0.0, g.derivative_wavenumber(s, j)) * wi[s];
      }
      upper.push_back(ScalarField::from_spectrum(g, e));
    }
  }
  return CurlField(g, std::move(upper));
}

VectorField div_of_curl(const CurlField& omega) {
  const Grid& g = omega.grid();
  const int dim = omega.dim();
  std::vector<std::vector<Complex>> spec;
  for (const auto& e : omega.upper()) spec.push_back(e.spectrum());
  std::vector<ScalarField> comps;
  std::vector<Complex> acc(g.spectral_size());
  for (int j = 0; j < dim; ++j) {
    std::fill(acc.begin(), acc.end(), Complex(0.0, 0.0));
    for (int i = 0; i < dim; ++i) {
      if (i == j) continue;
      const double sign = i < j ? 1.0 : -1.0;
      const auto& w = spec[CurlField::upper_index(std::min(i, j), std::max(i, j), dim)];
      for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += sign * Complex(0.0, g.derivative_wavenumber(s, i)) * w[s];
    }
    comps.push_back(ScalarField::from_spectrum(g, acc));
  }
  return VectorField(std::move(comps));
}

ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  return multiply_spectrum(f, [&](std::size_t s) { return -g.k_squared(s); });
}

ScalarField inverse_laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  auto c = f.spectrum();
  const double scale = f.max_abs();
  if (std::abs(c[0]) > 1e-12 * scale) {
    throw Error(ErrorCode::NonZeroMean, "inverse Laplacian needs a mean-free field");
  }
  c[0] = 0.0;
  for (std::size_t s = 1; s < c.size(); ++s) c[s] /= -g.k_squared(s);
  return ScalarField::from_spectrum(g, c);
}

ScalarField dealias(const ScalarField& f) {
  const Grid& g = f.grid();
  return multiply_spectrum(f, [&](std::size_t s) { return g.is_dealiased_out(s) ? 0.0 : 1.0; });
}

VectorField dealias(const VectorField& w) {
  std::vector<ScalarField> c;
  for (const auto& x : w.components()) c.push_back(dealias(x));
  return VectorField(std::move(c));
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) { return dealias(a * b); }

ScalarField remove_mean(const ScalarField& f) {
  const double m = f.mean();
  return f.map([m](double x) { return x - m; });
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * a.grid().cell_volume();
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double l2_norm(std::span<const ScalarField> components) {
  double acc = 0.0;
  for (const auto& c : components) acc += inner(c, c);
  return std::sqrt(acc);
}

double cyclic_compatibility_residual(const CurlField& omega) {
  if (omega.dim() != 3) return 0.0;
  // d_0 w_12 + d_1 w_20 + d_2 w_01
  const ScalarField r = partial(omega.at(1, 2), 0) + partial(omega.at(2, 0), 1) + partial(omega.at(0, 1), 2);
  return l2_norm(r);
}

}  // namespace bdns
