#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace igbot {

using Rng = std::mt19937_64;

// Per-unit seed for trees, folds and repetitions: seed_i = master xor i.
constexpr std::uint64_t unit_seed(std::uint64_t master, std::uint64_t index) {
  return master ^ index;
}

// Well-mixed seed for an independent pipeline stage.
constexpr std::uint64_t stage_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t z = master ^ (tag * 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  auto idx = iota_indices(n);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace igbot
