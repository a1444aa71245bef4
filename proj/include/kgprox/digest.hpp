#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kgprox {

inline uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data);
std::string digest_file(const std::string& path); // throws IoError

// Shortest round-trip decimal form of a double; stable across runs.
std::string format_double(double v);

} // namespace kgprox
