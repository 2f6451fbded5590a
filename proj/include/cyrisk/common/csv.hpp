#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace cyrisk::csv {

// Shortest round-trip-safe decimal form; %.17g keeps the exact double.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string num(std::uint64_t v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }

}  // namespace cyrisk::csv
