#pragma once

#include <cmath>
#include <functional>

#include "bdns/grid.hpp"

namespace testing {

inline double max_diff(const bdns::ScalarField& a, const bdns::ScalarField& b) { return (a - b).max_abs(); }

inline double max_diff(const bdns::ScalarField& a, const std::function<double(const bdns::Point&)>& exact) {
  return max_diff(a, bdns::ScalarField::from_function(a.grid(), exact));
}

inline bdns::ScalarField field(const bdns::Grid& g, const std::function<double(const bdns::Point&)>& fn) {
  return bdns::ScalarField::from_function(g, fn);
}

}  // namespace testing
