#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"
#include "gve/symmetric_eigen.hpp"

namespace gve {

// Blocks whose smallest singular value is at or below this fraction of the
// largest are rejected as degenerate.
inline constexpr double kDefaultConditioningTolerance = 1e-10;

template <std::floating_point Real>
struct BlockFactor {
  BasicDenseMatrix<Real> z;                 // n x L, orthonormal columns
  std::vector<Real> singular_values;        // of the input block, non-increasing
};

template <std::floating_point Real>
struct BasicBlockOrthogonalizer {
  BasicDenseMatrix<Real> z;                              // n x p
  std::size_t block_width = 0;                           // L; the last block may be narrower
  std::vector<std::vector<Real>> block_singular_values;  // one sequence per block
  Real conditioning_tolerance = Real(kDefaultConditioningTolerance);

  std::size_t block_count() const noexcept { return block_singular_values.size(); }
};

using BlockOrthogonalizer = BasicBlockOrthogonalizer<double>;

namespace detail {

// Thrown by the per-block kernel; the caller attaches the block index.
struct RankDeficient {
  double smallest;
};

}  // namespace detail

/**
 * Orthonormal polar factor Z = U V^T of an n x L block X = U S V^T.
 *
 * Computed with one-sided (Hestenes) cyclic Jacobi: column pairs of X are
 * rotated until mutually orthogonal, which diagonalizes X^T X implicitly
 * without squaring the condition number. The accumulated rotations give V,
 * the column norms give S and the normalized columns give U.
 *
 * `relative_tolerance` declares the block degenerate when
 * s_min <= relative_tolerance * s_max.
 */
template <std::floating_point Real>
BlockFactor<Real> block_orthonormal_factor(const BasicDenseMatrix<Real>& block,
                                           Real relative_tolerance = Real(kDefaultConditioningTolerance)) {
  const std::size_t n = block.rows();
  const std::size_t width = block.cols();
  detail::require(width >= 1, "block must have at least one column");
  detail::require(width <= n, "block width must not exceed the number of rows");

  // Column-major working copy: w[c] is column c.
  std::vector<std::vector<Real>> w(width, std::vector<Real>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < width; ++c) w[c][i] = block(i, c);
  auto v = BasicDenseMatrix<Real>::identity(width);

  const Real eps = std::numeric_limits<Real>::epsilon();
  bool rotated = true;
  int sweep = 0;
  Real worst = 0;
  for (; sweep < kJacobiMaxSweeps && rotated; ++sweep) {
    rotated = false;
    worst = 0;
    for (std::size_t p = 0; p + 1 < width; ++p) {
      for (std::size_t q = p + 1; q < width; ++q) {
        Real alpha = 0, beta = 0, gamma = 0;
        const auto& wp = w[p];
        const auto& wq = w[q];
        for (std::size_t i = 0; i < n; ++i) {
          alpha += wp[i] * wp[i];
          beta += wq[i] * wq[i];
          gamma += wp[i] * wq[i];
        }
        if (gamma == Real(0)) continue;
        const Real bound = std::sqrt(alpha * beta);
        if (std::abs(gamma) <= eps * bound) continue;
        worst = std::max(worst, std::abs(gamma) / bound);
        rotated = true;

        const Real zeta = (beta - alpha) / (2 * gamma);
        const Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const Real c = 1 / std::sqrt(1 + t * t);
        const Real s = c * t;
        auto& mp = w[p];
        auto& mq = w[q];
        for (std::size_t i = 0; i < n; ++i) {
          const Real x = mp[i];
          const Real y = mq[i];
          mp[i] = c * x - s * y;
          mq[i] = s * x + c * y;
        }
        for (std::size_t k = 0; k < width; ++k) {
          const Real x = v(k, p);
          const Real y = v(k, q);
          v(k, p) = c * x - s * y;
          v(k, q) = s * x + c * y;
        }
      }
    }
  }
  if (rotated) throw ConvergenceFailure("one-sided Jacobi did not converge", static_cast<double>(worst));

  std::vector<Real> sigma(width);
  for (std::size_t c = 0; c < width; ++c) sigma[c] = norm2<Real>(w[c]);
  std::vector<std::size_t> order(width);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  BlockFactor<Real> out;
  out.singular_values.resize(width);
  for (std::size_t k = 0; k < width; ++k) out.singular_values[k] = sigma[order[k]];
  const Real smax = out.singular_values.front();
  const Real smin = out.singular_values.back();
  if (!(smax > Real(0)) || smin <= relative_tolerance * smax) throw detail::RankDeficient{static_cast<double>(smin)};

  // Z = U V^T with U[:, c] = w[c] / sigma[c].
  out.z = BasicDenseMatrix<Real>(n, width);
  for (std::size_t c = 0; c < width; ++c) {
    const Real inv = 1 / sigma[c];
    for (std::size_t i = 0; i < n; ++i) {
      const Real u = w[c][i] * inv;
      auto zrow = out.z.row(i);
      for (std::size_t k = 0; k < width; ++k) zrow[k] += u * v(k, c);
    }
  }
  return out;
}

// Single-block convenience that reports rank deficiency as block 0.
template <std::floating_point Real>
BlockFactor<Real> orthonormal_factor(const BasicDenseMatrix<Real>& block,
                                     Real relative_tolerance = Real(kDefaultConditioningTolerance)) {
  try {
    return block_orthonormal_factor(block, relative_tolerance);
  } catch (const detail::RankDeficient& e) {
    throw DegenerateBlock(0, e.smallest);
  }
}

struct DesignOptions {
  double relative_tolerance = kDefaultConditioningTolerance;
  unsigned workers = 1;
};

/**
 * Blockwise regularized design Z = [Z_1, ..., Z_m] of X.
 *
 * Columns are cut into consecutive blocks of width L; when L does not divide
 * p the trailing p mod L columns form a final narrower block. Blocks are
 * independent, so `workers` > 1 splits them across threads with results
 * identical to the sequential order. The lowest-index degenerate block is
 * reported.
 */
template <std::floating_point Real>
BasicBlockOrthogonalizer<Real> build_regularized_design(const BasicDenseMatrix<Real>& x, std::size_t window,
                                                        const DesignOptions& options = {}) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  detail::require(window >= 1, "window length must be at least 1");
  detail::require(window <= n, "window length must not exceed the number of rows");
  detail::require(p >= 1, "design must have at least one column");

  const std::size_t blocks = (p + window - 1) / window;
  BasicBlockOrthogonalizer<Real> out;
  out.z = BasicDenseMatrix<Real>(n, p);
  out.block_width = window;
  out.block_singular_values.resize(blocks);
  out.conditioning_tolerance = static_cast<Real>(options.relative_tolerance);

  std::vector<std::optional<double>> failures(blocks);
  std::vector<std::exception_ptr> errors(blocks);
  auto run_block = [&](std::size_t b) {
    const std::size_t first = b * window;
    const std::size_t width = std::min(window, p - first);
    try {
      auto factor = block_orthonormal_factor(x.columns(first, width), static_cast<Real>(options.relative_tolerance));
      for (std::size_t i = 0; i < n; ++i)
        std::copy_n(factor.z.row(i).begin(), width, out.z.row(i).begin() + first);
      out.block_singular_values[b] = std::move(factor.singular_values);
    } catch (const detail::RankDeficient& e) {
      failures[b] = e.smallest;
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
      });
  }

  for (std::size_t b = 0; b < blocks; ++b) {
    if (failures[b]) throw DegenerateBlock(b, *failures[b]);
    if (errors[b]) std::rethrow_exception(errors[b]);
  }
  return out;
}

}  // namespace gve
