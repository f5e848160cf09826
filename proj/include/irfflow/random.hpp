#ifndef IRFFLOW_RANDOM_HPP
#define IRFFLOW_RANDOM_HPP

#include <cstdint>
#include <random>

namespace irfflow {

using Rng = std::mt19937_64;

/// Uniform draw on [0, 1) with 53 random bits; never returns 1.0.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>{}(rng); }

/// SplitMix64 finalizer; used to derive independent seeds from (seed, index) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

}  // namespace irfflow

#endif  // IRFFLOW_RANDOM_HPP
