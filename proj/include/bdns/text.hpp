#pragma once

#include <charconv>
#include <string>

namespace bdns {

/// Shortest round-trip decimal form of a double.
inline std::string to_text(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace bdns
