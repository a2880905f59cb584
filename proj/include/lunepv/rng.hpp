#pragma once

#include <cstdint>

namespace lunepv::rng {

// SplitMix64 finalizer, used as a counter-based generator: every draw is a
// pure function of (seed, sample index, dimension), so any sample can be
// produced on any thread and parallel runs are bitwise reproducible.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t at(std::uint64_t seed, std::uint64_t index, std::uint64_t dim) {
  std::uint64_t h = splitmix64(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  return splitmix64(h + 0xbf58476d1ce4e5b9ull * dim);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t dim) {
  return uniform01(at(seed, index, dim));
}

// Derived seed for a nested estimator attached to one outer sample.
inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t index, std::uint64_t branch) {
  return at(seed, index, 16 + branch);
}

}  // namespace lunepv::rng
