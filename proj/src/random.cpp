#include "bdns/random.hpp"

#include <cstdlib>

namespace bdns {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double CounterRng::uniform() {
  const std::uint64_t bits = splitmix64(key_ + splitmix64(counter_++));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

ScalarField random_field(const Grid& grid, CounterRng& rng, const std::function<double(double radius)>& envelope) {
  const int nyq = grid.points_per_axis() / 2;
  std::vector<Complex> c(grid.spectral_size(), Complex(0.0, 0.0));
  for (std::size_t s = 1; s < c.size(); ++s) {
    const double re = rng.uniform(-1.0, 1.0);
    const double im = rng.uniform(-1.0, 1.0);
    if (grid.is_dealiased_out(s)) continue;
    bool nyquist = false;
    for (int a = 0; a < grid.dim(); ++a) nyquist = nyquist || std::abs(grid.mode(s)[static_cast<std::size_t>(a)]) == nyq;
    if (nyquist) continue;
    c[s] = envelope(grid.radius(s)) * Complex(re, im);
  }
  // c2r keeps the Hermitian part of c: a real field on the same support.
  return ScalarField::from_spectrum(grid, c);
}

}  // namespace bdns
