#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, key, counter), so the generation order and thread count do not matter.

#include <cstdint>
#include <initializer_list>

namespace snu {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_words(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (auto w : words) h = mix64(h ^ mix64(w + 0x3c6ef372fe94f82bULL));
  return h;
}

// Uniform double in the open interval (0, 1).
constexpr double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Seed of trial t; independent of every other trial.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return hash_words(master, {0x7472'6961'6cULL, trial});
}

}  // namespace snu
