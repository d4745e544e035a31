#pragma once
// Counter-based random primitives.  Every draw is a pure function of a key,
// so Monte Carlo runs are reproducible bit for bit and a coordinate's noise
// does not depend on the order coordinates are visited in.

#include <cmath>
#include <cstdint>

namespace tomotest::rng {

// SplitMix64 finalizer: cheap, portable, good avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Order-sensitive key folding: fold(fold(s, a), b) differs from
// fold(fold(s, b), a).
inline std::uint64_t fold(std::uint64_t key, std::uint64_t v) {
  return mix64(key ^ (v + 0x9E3779B97F4A7C15ull + (key << 6) + (key >> 2)));
}

// Maps to (0, 1]; never returns 0, so log() below is safe.
inline double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

// Standard Gaussian keyed by (key, j, l) via Box-Muller.
inline double gaussian(std::uint64_t key, std::int64_t j, std::int64_t l) {
  std::uint64_t k = fold(fold(key, static_cast<std::uint64_t>(j)), static_cast<std::uint64_t>(l));
  double u1 = to_unit(mix64(k));
  double u2 = to_unit(mix64(k ^ 0xD1B54A32D192ED03ull));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

// Rademacher sign in {-1, +1} keyed by (key, j, l).
inline double sign(std::uint64_t key, std::int64_t j, std::int64_t l) {
  std::uint64_t k = fold(fold(key, static_cast<std::uint64_t>(j)), static_cast<std::uint64_t>(l));
  return (mix64(k ^ 0x9E6C63D0876A9A62ull) >> 63) ? 1.0 : -1.0;
}

}  // namespace tomotest::rng
