#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"

namespace gve {

struct LassoSolution {
  std::vector<double> beta;
  double lambda = 0;
  std::size_t iterations = 0;  // coordinate sweeps, full and active-set
  double objective = 0;        // ||X beta - y||^2 + 2 lambda ||beta||_1
  bool converged = false;
  std::vector<double> objective_trace;  // after every sweep, when requested
};

struct LassoOptions {
  double tolerance = 1e-8;     // max |delta beta_j| in a full sweep
  std::size_t max_sweeps = 10000;
  bool record_trace = false;
};

inline double soft_threshold(double value, double threshold) noexcept {
  if (value > threshold) return value - threshold;
  if (value < -threshold) return value + threshold;
  return 0.0;
}

// Closed-form minimizer of ||beta - y||^2 + 2 lambda ||beta||_1.
inline std::vector<double> soft_threshold_solution(std::span<const double> y, double lambda) {
  detail::require(lambda >= 0, "lambda must be non-negative");
  std::vector<double> beta(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) beta[i] = soft_threshold(y[i], lambda);
  return beta;
}

inline double lasso_objective(const DenseMatrix& x, std::span<const double> y, std::span<const double> beta,
                              double lambda) {
  const auto fit = matvec(x, beta);
  double rss = 0, l1 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) rss += (fit[i] - y[i]) * (fit[i] - y[i]);
  for (double b : beta) l1 += std::abs(b);
  return rss + 2 * lambda * l1;
}

/**
 * Column-major copy of a design with cached squared column norms, reused
 * across the lambda path and CV folds.
 */
class LassoDesign {
 public:
  explicit LassoDesign(const DenseMatrix& x) : n_(x.rows()), p_(x.cols()), cols_(x.rows() * x.cols()), sq_norm_(x.cols()) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < p_; ++j) cols_[j * n_ + i] = x(i, j);
    for (std::size_t j = 0; j < p_; ++j) {
      double s = 0;
      for (double v : column(j)) s += v * v;
      sq_norm_[j] = s;
    }
  }

  // Row subset of `x` (training fold).
  LassoDesign(const DenseMatrix& x, std::span<const std::size_t> rows)
      : n_(rows.size()), p_(x.cols()), cols_(rows.size() * x.cols()), sq_norm_(x.cols()) {
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t j = 0; j < p_; ++j) cols_[j * n_ + r] = x(rows[r], j);
    for (std::size_t j = 0; j < p_; ++j) {
      double s = 0;
      for (double v : column(j)) s += v * v;
      sq_norm_[j] = s;
    }
  }

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return p_; }
  std::span<const double> column(std::size_t j) const noexcept { return {cols_.data() + j * n_, n_}; }
  double squared_norm(std::size_t j) const noexcept { return sq_norm_[j]; }

 private:
  std::size_t n_, p_;
  std::vector<double> cols_;
  std::vector<double> sq_norm_;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double objective_from_residual(std::span<const double> residual, std::span<const double> beta, double lambda) {
  double rss = 0, l1 = 0;
  for (double r : residual) rss += r * r;
  for (double b : beta) l1 += std::abs(b);
  return rss + 2 * lambda * l1;
}

}  // namespace detail

/**
 * Cyclic coordinate descent for ||X beta - y||^2 + 2 lambda ||beta||_1.
 *
 * Each coordinate step is the exact minimizer
 *   beta_j = S(x_j^T r_j, lambda) / ||x_j||^2,   r_j = y - X beta + x_j beta_j,
 * so the objective never increases. Full sweeps alternate with sweeps over
 * the current support until a full sweep moves no coordinate by more than
 * the tolerance. Running out of sweeps is not an error: the last iterate is
 * returned with converged = false.
 */
inline LassoSolution lasso_coordinate_descent(const LassoDesign& x, std::span<const double> y, double lambda,
                                              const LassoOptions& options = {},
                                              std::optional<std::span<const double>> warm_start = std::nullopt) {
  detail::require(y.size() == x.rows(), "response length must equal the number of design rows");
  detail::require(lambda >= 0, "lambda must be non-negative");
  detail::require(options.tolerance > 0, "tolerance must be positive");
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();

  LassoSolution sol;
  sol.lambda = lambda;
  sol.beta.assign(p, 0.0);
  if (warm_start) {
    detail::require(warm_start->size() == p, "warm start length must equal the number of columns");
    std::copy(warm_start->begin(), warm_start->end(), sol.beta.begin());
  }
  std::vector<double> residual(y.begin(), y.end());
  for (std::size_t j = 0; j < p; ++j) {
    if (sol.beta[j] == 0.0) continue;
    const auto col = x.column(j);
    for (std::size_t i = 0; i < n; ++i) residual[i] -= col[i] * sol.beta[j];
  }

  auto update = [&](std::size_t j) {
    const double norm = x.squared_norm(j);
    const double old = sol.beta[j];
    if (norm == 0.0) {
      sol.beta[j] = 0.0;
      return std::abs(old);
    }
    const auto col = x.column(j);
    const double rho = detail::dot(col, residual) + norm * old;
    const double next = soft_threshold(rho, lambda) / norm;
    const double delta = next - old;
    if (delta != 0.0) {
      for (std::size_t i = 0; i < n; ++i) residual[i] -= col[i] * delta;
      sol.beta[j] = next;
    }
    return std::abs(delta);
  };

  std::vector<std::size_t> active;
  while (sol.iterations < options.max_sweeps) {
    double max_delta = 0;
    for (std::size_t j = 0; j < p; ++j) max_delta = std::max(max_delta, update(j));
    ++sol.iterations;
    if (options.record_trace) sol.objective_trace.push_back(detail::objective_from_residual(residual, sol.beta, lambda));
    if (max_delta <= options.tolerance) {
      sol.converged = true;
      break;
    }
    active.clear();
    for (std::size_t j = 0; j < p; ++j)
      if (sol.beta[j] != 0.0) active.push_back(j);
    while (sol.iterations < options.max_sweeps) {
      double active_delta = 0;
      for (std::size_t j : active) active_delta = std::max(active_delta, update(j));
      ++sol.iterations;
      if (options.record_trace)
        sol.objective_trace.push_back(detail::objective_from_residual(residual, sol.beta, lambda));
      if (active_delta <= options.tolerance) break;
    }
  }
  sol.objective = detail::objective_from_residual(residual, sol.beta, lambda);
  return sol;
}

inline LassoSolution lasso_coordinate_descent(const DenseMatrix& x, std::span<const double> y, double lambda,
                                              const LassoOptions& options = {},
                                              std::optional<std::span<const double>> warm_start = std::nullopt) {
  detail::require(y.size() == x.rows(), "response length must equal the number of design rows");
  return lasso_coordinate_descent(LassoDesign(x), y, lambda, options, warm_start);
}

}  // namespace gve
