#pragma once

#include <algorithm>
#include <cstdint>

#include "gve/dense_matrix.hpp"
#include "gve/random.hpp"
#include "gve/symmetric_eigen.hpp"

namespace gve {

struct RipProbeResult {
  std::size_t order = 0;
  double delta_lower_bound = 0;
  std::size_t subsets_sampled = 0;
  std::uint64_t seed = 0;
};

/**
 * Empirical lower bound on the RIP constant of order s.
 *
 * Samples `subsets` uniform s-subsets of columns and reports the largest
 * spectral deviation max(1 - lambda_min, lambda_max - 1) of X_S^T X_S seen.
 * Subsets are drawn sequentially from one seeded stream, so a larger sample
 * extends a smaller one and the bound never decreases with `subsets`.
 */
template <std::floating_point Real>
RipProbeResult estimate_rip_delta(const BasicDenseMatrix<Real>& x, std::size_t s, std::size_t subsets,
                                  std::uint64_t seed) {
  detail::require(s >= 1 && s <= std::min(x.rows(), x.cols()), "RIP order must lie in [1, min(n, p)]");
  detail::require(subsets >= 1, "at least one subset must be sampled");
  Rng rng(seed);
  double delta = 0;
  for (std::size_t t = 0; t < subsets; ++t) {
    const auto cols = sample_subset(rng, x.cols(), s);
    const auto eig = symmetric_eigendecomposition(gram(x.columns(cols)));
    delta = std::max({delta, 1.0 - static_cast<double>(eig.values.back()),
                      static_cast<double>(eig.values.front()) - 1.0});
  }
  return {s, std::max(0.0, delta), subsets, seed};
}

}  // namespace gve
