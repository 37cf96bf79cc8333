#pragma once

#include <cstdint>
#include <string_view>

namespace extsum {

// FNV-1a, 64-bit. Used for content checksums and per-item seed derivation;
// stable across platforms by construction.
inline uint64_t fnv1a64(std::string_view bytes,
                        uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// One splitmix64 mixing step; spreads low-entropy seeds.
inline uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace extsum
