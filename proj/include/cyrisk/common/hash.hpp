#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cyrisk::hash {

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

// Digest string used for config identity and manifest entries.
inline std::string fnv_digest(std::string_view bytes) {
  return "fnv64:" + hex64(fnv1a64(bytes));
}

}  // namespace cyrisk::hash
