#pragma once

// Counter-based generator: the value at (seed, stream, counter) is a pure
// function of its arguments, so draws are reproducible across platforms.

#include <cstdint>
#include <functional>

#include "bdns/grid.hpp"

namespace bdns {

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed) ^ splitmix64(~stream)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Real mean-free field whose mode k has a random complex coefficient of
/// modulus at most envelope(|k|). Modes removed by the two-thirds rule, the
/// Nyquist planes and the zero mode stay empty.
ScalarField random_field(const Grid& grid, CounterRng& rng, const std::function<double(double radius)>& envelope);

}  // namespace bdns
