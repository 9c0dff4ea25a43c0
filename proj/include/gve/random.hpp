#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gve/error.hpp"

namespace gve {

using Rng = std::mt19937_64;

// splitmix64 finalizer: a bijective avalanche on 64 bits.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives an independent sub-seed from a base seed and a path of indices.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

// Standard Laplace (location 0, scale 1) by inverse CDF.
template <class Engine>
double sample_laplace(Engine& rng) {
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  double u = unif(rng);
  while (u == -0.5) u = unif(rng);
  const double mag = -std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -mag : mag;
}

// Uniform random s-subset of {0, ..., p-1} by partial Fisher-Yates, in draw order.
template <class Engine>
std::vector<std::size_t> sample_subset(Engine& rng, std::size_t p, std::size_t s) {
  detail::require(s <= p, "subset size exceeds population");
  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, p - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(s);
  return idx;
}

}  // namespace gve
