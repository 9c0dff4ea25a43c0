#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "gve/error.hpp"

namespace gve {

// Partition of a length-d domain into m = floor(d / L) consecutive windows.
struct WindowPlan {
  std::size_t length = 0;        // L
  std::size_t count = 0;         // m
  std::size_t trim_count = 0;    // k, number of smallest statistics averaged
  std::size_t dropped_tail = 0;  // d - m L

  friend bool operator==(const WindowPlan&, const WindowPlan&) = default;
};

// Default trim rule: average the smaller half, k = max(1, floor(m / 2)).
constexpr std::size_t default_trim_count(std::size_t window_count) noexcept {
  return std::max<std::size_t>(1, window_count / 2);
}

inline WindowPlan make_window_plan(std::size_t domain_length, std::size_t length) {
  detail::require(length >= 1, "window length must be at least 1");
  const std::size_t count = domain_length / length;
  detail::require(count >= 2, "at least two full windows are required");
  return {length, count, default_trim_count(count), domain_length - count * length};
}

// S_j = (1/L) sum_{i in window j} v_i^2 over the full windows of v.
template <std::floating_point Real>
std::vector<Real> window_stats(std::span<const Real> v, std::size_t length) {
  const auto plan = make_window_plan(v.size(), length);
  std::vector<Real> stats(plan.count);
  for (std::size_t j = 0; j < plan.count; ++j) {
    Real acc = 0;
    for (std::size_t i = j * length; i < (j + 1) * length; ++i) acc += v[i] * v[i];
    stats[j] = acc / static_cast<Real>(length);
  }
  return stats;
}

// Mean of the k smallest entries, summed in ascending order.
template <std::floating_point Real>
Real trimmed_window_average(std::span<const Real> stats, std::size_t k) {
  detail::require(k >= 1 && k <= stats.size(), "trim count must lie in [1, number of windows]");
  std::vector<Real> sorted(stats.begin(), stats.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
  Real acc = 0;
  for (std::size_t i = 0; i < k; ++i) acc += sorted[i];
  return acc / static_cast<Real>(k);
}

}  // namespace gve
