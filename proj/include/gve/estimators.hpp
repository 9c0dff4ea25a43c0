#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gve/block_orthogonalizer.hpp"
#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"
#include "gve/window.hpp"

namespace gve {

enum class Method { ortho, svd, fast, tv, oracle };

// How the response is mapped into coefficient space before windowing.
enum class Preconditioner {
  svd,   // y~ = Z^T y with Z the blockwise orthonormal factor of X
  fast,  // y~ = X^T y
};

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ortho: return "ortho";
    case Method::svd: return "svd";
    case Method::fast: return "fast";
    case Method::tv: return "tv";
    case Method::oracle: return "oracle";
  }
  return "?";
}

constexpr std::string_view to_string(Preconditioner p) noexcept {
  return p == Preconditioner::svd ? "svd" : "fast";
}

template <std::floating_point Real>
struct BasicVarianceEstimate {
  Real sigma2 = 0;
  Real sigma = 0;
  Method method = Method::ortho;
  std::optional<WindowPlan> plan;  // absent for the oracle
  std::vector<Real> window_stats;
  // sigma2 = stat_scale * trimmed mean of window_stats (before bias correction).
  Real stat_scale = 1;
  bool bias_corrected = false;
};

using VarianceEstimate = BasicVarianceEstimate<double>;

namespace detail {

template <std::floating_point Real>
BasicVarianceEstimate<Real> windowed_estimate(std::span<const Real> v, std::size_t length, Method method,
                                              Real scale = Real(1)) {
  BasicVarianceEstimate<Real> e;
  e.plan = make_window_plan(v.size(), length);
  e.window_stats = window_stats(v, length);
  e.sigma2 = scale * trimmed_window_average<Real>(e.window_stats, e.plan->trim_count);
  e.sigma = std::sqrt(e.sigma2);
  e.method = method;
  e.stat_scale = scale;
  return e;
}

}  // namespace detail

// Greedy window estimator for an orthonormal design, applied to y directly.
template <std::floating_point Real>
BasicVarianceEstimate<Real> gve_orthonormal(std::span<const Real> y, std::size_t length) {
  return detail::windowed_estimate(y, length, Method::ortho);
}

/**
 * Greedy window estimator for a general (RIP) design.
 *
 * The response is mapped to p coefficients, either through the blockwise
 * orthonormal factor Z (svd) or through X itself (fast), then windowed into
 * m = floor(p / L) windows whose smallest floor(m / 2) statistics are
 * averaged. The svd route requires L <= n and full-rank blocks.
 */
template <std::floating_point Real>
BasicVarianceEstimate<Real> gve_rip(const BasicDenseMatrix<Real>& x, std::span<const Real> y, std::size_t length,
                                    Preconditioner pre, const DesignOptions& options = {}) {
  detail::require(y.size() == x.rows(), "response length must equal the number of design rows");
  detail::require(length >= 1 && length <= x.rows(), "window length must lie in [1, n]");
  detail::require(x.cols() / length >= 2, "at least two full windows are required");

  std::vector<Real> transformed;
  if (pre == Preconditioner::svd) {
    const auto design = build_regularized_design(x, length, options);
    transformed = transpose_matvec(design.z, y);
  } else {
    transformed = transpose_matvec(x, y);
  }
  return detail::windowed_estimate<Real>(transformed, length, pre == Preconditioner::svd ? Method::svd : Method::fast);
}

/**
 * Total-variation variant: windows over the p - 1 consecutive differences.
 *
 * The trimmed mean estimates Var(eta_{i+1} - eta_i) = 2 sigma^2, so the
 * result is halved.
 */
template <std::floating_point Real>
BasicVarianceEstimate<Real> gve_tv(std::span<const Real> y, std::size_t length) {
  detail::require(y.size() >= 2, "total-variation estimate needs at least two samples");
  std::vector<Real> diff(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) diff[i] = y[i + 1] - y[i];
  return detail::windowed_estimate<Real>(diff, length, Method::tv, Real(0.5));
}

// Multiplies by 1 + 1/log(p). Not idempotent: each call multiplies again.
template <std::floating_point Real>
BasicVarianceEstimate<Real> bias_correct(BasicVarianceEstimate<Real> e, std::size_t p) {
  detail::require(p >= 3, "bias correction needs p >= 3");
  e.sigma2 *= Real(1) + Real(1) / std::log(static_cast<Real>(p));
  e.sigma = std::sqrt(e.sigma2);
  e.bias_corrected = true;
  return e;
}

// ||eta||_2 / sqrt(n) from the true noise.
template <std::floating_point Real>
BasicVarianceEstimate<Real> oracle_sigma(std::span<const Real> eta, std::size_t n) {
  detail::require(n >= 1, "oracle estimate needs a non-empty noise vector");
  detail::require(eta.size() == n, "noise length must equal n");
  BasicVarianceEstimate<Real> e;
  e.method = Method::oracle;
  e.sigma = norm2(eta) / std::sqrt(static_cast<Real>(n));
  e.sigma2 = e.sigma * e.sigma;
  return e;
}

// LASSO penalty lambda = 4 sigma^2 log(n) / n.
template <std::floating_point Real>
Real lambda_from_sigma(Real sigma2, std::size_t n) {
  detail::require(n >= 2, "lambda mapping needs n >= 2");
  detail::require(sigma2 >= 0, "variance must be non-negative");
  return 4 * sigma2 * std::log(static_cast<Real>(n)) / static_cast<Real>(n);
}

/**
 * Advisory checks of the window/sparsity regime the accuracy guarantees
 * assume: log^3 p <= L <= n and, when s is known, s <= p / (2L) for the
 * orthonormal case or 2L <= s <= n / (2L) for a RIP design. Returns one
 * message per violated condition; never throws on a violation.
 */
inline std::vector<std::string> guarantee_warnings(std::size_t n, std::size_t p, std::size_t length,
                                                   std::optional<std::size_t> sparsity = std::nullopt,
                                                   bool orthonormal = false) {
  std::vector<std::string> out;
  const double logp = std::log(static_cast<double>(p));
  if (static_cast<double>(length) < logp * logp * logp)
    out.push_back("window length " + std::to_string(length) + " is below log^3(p) = " +
                  std::to_string(logp * logp * logp));
  if (length > n) out.push_back("window length exceeds n");
  if (sparsity) {
    const double s = static_cast<double>(*sparsity);
    const double L = static_cast<double>(length);
    if (orthonormal) {
      if (s > static_cast<double>(p) / (2 * L)) out.push_back("sparsity exceeds p / (2L)");
    } else {
      if (s < 2 * L) out.push_back("sparsity is below 2L");
      if (s > static_cast<double>(n) / (2 * L)) out.push_back("sparsity exceeds n / (2L)");
    }
  }
  return out;
}

}  // namespace gve
