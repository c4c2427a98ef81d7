#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pathcast {

/// splitmix64 finalizer; decorrelates nearby keys.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// RNG stream keyed by (seed, purpose, index). Streams for distinct purposes
/// or indices are independent, so adding a new consumer never shifts the
/// draws of an existing one.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view purpose,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(mix64(seed ^ mix64(fnv1a(purpose) + mix64(index))));
}

}  // namespace pathcast
