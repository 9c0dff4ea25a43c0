#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"
#include "gve/estimators.hpp"

namespace gve {

struct WindowSelection {
  std::size_t selected = 0;
  std::vector<std::size_t> candidates;
  std::vector<double> estimates;  // sigma2-hat per candidate; NaN where the candidate was invalid
  std::vector<double> errors;     // |estimate - truth| (oracle selection only)
};

/**
 * Index chosen by the inflection rule: the first candidate at which the
 * discrete second difference of `values` changes sign, or the last index
 * when no sign change occurs. Zero second differences carry no sign.
 */
inline std::size_t inflection_index(std::span<const double> values) {
  detail::require(values.size() >= 4, "inflection rule needs at least four candidates");
  int last_sign = 0;
  for (std::size_t i = 0; i + 2 < values.size(); ++i) {
    const double d2 = values[i + 2] - 2 * values[i + 1] + values[i];
    const int sign = (d2 > 0) - (d2 < 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) return i + 1;
    last_sign = sign;
  }
  return values.size() - 1;
}

// Inflection-point selection over ascending candidates; `estimate(L)` returns sigma2-hat.
template <class Estimator>
  requires std::invocable<Estimator&, std::size_t>
WindowSelection select_window_inflection(std::span<const std::size_t> candidates, Estimator&& estimate) {
  detail::require(candidates.size() >= 4, "inflection selection needs at least four candidates");
  for (std::size_t i = 1; i < candidates.size(); ++i)
    detail::require(candidates[i] > candidates[i - 1], "window candidates must be strictly ascending");
  WindowSelection out;
  out.candidates.assign(candidates.begin(), candidates.end());
  out.estimates.reserve(candidates.size());
  for (std::size_t length : candidates) out.estimates.push_back(static_cast<double>(estimate(length)));
  out.selected = candidates[inflection_index(out.estimates)];
  return out;
}

template <std::floating_point Real>
WindowSelection select_window_inflection(const BasicDenseMatrix<Real>& x, std::span<const Real> y,
                                         std::span<const std::size_t> candidates, Preconditioner pre,
                                         const DesignOptions& options = {}) {
  return select_window_inflection(candidates, [&](std::size_t length) {
    return gve_rip(x, y, length, pre, options).sigma2;
  });
}

/**
 * Oracle selection: the candidate minimizing |sigma2-hat(L) - truth|, ties
 * going to the larger L. Candidates the estimator rejects with InvalidInput
 * are skipped; at least one must be valid.
 */
template <class Estimator>
  requires std::invocable<Estimator&, std::size_t>
WindowSelection select_window_oracle(std::span<const std::size_t> candidates, double sigma2_true,
                                     Estimator&& estimate) {
  detail::require(sigma2_true >= 0, "true variance must be non-negative");
  WindowSelection out;
  out.candidates.assign(candidates.begin(), candidates.end());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> best;
  for (std::size_t length : candidates) {
    double value = nan;
    try {
      value = static_cast<double>(estimate(length));
    } catch (const InvalidInput&) {
    }
    const double err = std::isnan(value) ? nan : std::abs(value - sigma2_true);
    out.estimates.push_back(value);
    out.errors.push_back(err);
    if (std::isnan(err)) continue;
    if (!best || err < *best || (err == *best && length > out.selected)) {
      best = err;
      out.selected = length;
    }
  }
  detail::require(best.has_value(), "no valid window candidate");
  return out;
}

template <std::floating_point Real>
WindowSelection select_window_oracle(const BasicDenseMatrix<Real>& x, std::span<const Real> y, double sigma2_true,
                                     std::span<const std::size_t> candidates, Preconditioner pre,
                                     const DesignOptions& options = {}) {
  return select_window_oracle(candidates, sigma2_true, [&](std::size_t length) {
    return gve_rip(x, y, length, pre, options).sigma2;
  });
}

// Geometric grid {2, 4, 8, ...} capped at n, plus n itself, keeping only
// lengths that leave at least two windows over a domain of size p.
inline std::vector<std::size_t> default_window_candidates(std::size_t n, std::size_t p) {
  std::vector<std::size_t> out;
  for (std::size_t length = 2; length <= n && p / length >= 2; length *= 2) out.push_back(length);
  if (n >= 1 && p / n >= 2 && (out.empty() || out.back() != n)) out.push_back(n);
  return out;
}

// Every L in [1, max_length] with floor(p / L) >= 2.
inline std::vector<std::size_t> all_window_candidates(std::size_t p, std::size_t max_length) {
  std::vector<std::size_t> out;
  for (std::size_t length = 1; length <= max_length && p / length >= 2; ++length) out.push_back(length);
  return out;
}

}  // namespace gve
