#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"
#include "gve/lasso.hpp"
#include "gve/random.hpp"

namespace gve {

struct CvResult {
  double sigma2 = 0;
  double lambda_min_mse = 0;
  double lambda_1se = 0;
  std::vector<double> lambda_grid;             // descending
  std::vector<std::vector<double>> fold_mse;   // [lambda][fold]
  std::vector<double> mean_mse;                // per lambda
  std::vector<double> standard_error;          // per lambda
  std::size_t support_size = 0;                // df at lambda_min_mse on the full data
};

// A looser sweep tolerance than the standalone solver: the held-out errors
// and the selected lambda are insensitive to it, while the near-interpolating
// end of the path needs thousands of sweeps per lambda at 1e-7.
struct CvOptions {
  std::size_t folds = 10;
  LassoOptions solver{1e-4, 10000, false};
};

// 100 log-spaced values from 2 ||X^T y||_inf down to 1e-3 of that.
inline std::vector<double> default_lambda_grid(const DenseMatrix& x, std::span<const double> y,
                                               std::size_t count = 100, double ratio = 1e-3) {
  detail::require(count >= 1, "lambda grid must be non-empty");
  const auto xty = transpose_matvec(x, y);
  double top = 0;
  for (double v : xty) top = std::max(top, std::abs(v));
  top *= 2;
  if (top == 0.0) top = 1.0;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    grid[k] = top * std::pow(ratio, frac);
  }
  return grid;
}

/**
 * K-fold cross-validated LASSO noise variance.
 *
 * Rows are shuffled with the seed and dealt round-robin into folds. Each
 * fold fits a warm-started path over the (strictly descending) grid and
 * records held-out MSE. lambda_min_mse minimizes the mean CV error (the
 * larger lambda wins ties); lambda_1se is the largest lambda whose mean
 * error is within one standard error of that minimum. The variance is
 * RSS / max(1, n - df) of the full-data fit at lambda_min_mse, with df the
 * support size.
 */
inline CvResult cv_lasso_variance(const DenseMatrix& x, std::span<const double> y, std::span<const double> grid,
                                  std::uint64_t seed, const CvOptions& options = {}) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const std::size_t folds = options.folds;
  detail::require(y.size() == n, "response length must equal the number of design rows");
  detail::require(folds >= 2, "at least two folds are required");
  detail::require(n >= folds, "every fold needs at least one row");
  detail::require(!grid.empty(), "lambda grid must be non-empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    detail::require(grid[k] >= 0, "lambda values must be non-negative");
    if (k > 0) detail::require(grid[k] < grid[k - 1], "lambda grid must be strictly descending");
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<std::size_t> fold_of(n);
  for (std::size_t r = 0; r < n; ++r) fold_of[perm[r]] = r % folds;

  CvResult out;
  out.lambda_grid.assign(grid.begin(), grid.end());
  out.fold_mse.assign(grid.size(), std::vector<double>(folds, 0.0));

  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t r = 0; r < n; ++r) (fold_of[r] == f ? test : train).push_back(r);
    detail::require(!test.empty() && !train.empty(), "degenerate fold");
    const LassoDesign design(x, train);
    std::vector<double> y_train(train.size());
    for (std::size_t r = 0; r < train.size(); ++r) y_train[r] = y[train[r]];

    std::vector<double> beta(p, 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto sol = lasso_coordinate_descent(design, y_train, grid[k], options.solver, std::span<const double>(beta));
      beta = std::move(sol.beta);
      double sse = 0;
      for (std::size_t r : test) {
        double fit = 0;
        const auto row = x.row(r);
        for (std::size_t j = 0; j < p; ++j)
          if (beta[j] != 0.0) fit += row[j] * beta[j];
        sse += (y[r] - fit) * (y[r] - fit);
      }
      out.fold_mse[k][f] = sse / static_cast<double>(test.size());
    }
  }

  out.mean_mse.resize(grid.size());
  out.standard_error.resize(grid.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& row = out.fold_mse[k];
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(folds);
    double ss = 0;
    for (double v : row) ss += (v - mean) * (v - mean);
    out.mean_mse[k] = mean;
    out.standard_error[k] = std::sqrt(ss / static_cast<double>(folds - 1)) / std::sqrt(static_cast<double>(folds));
    if (mean < out.mean_mse[best]) best = k;
  }
  out.lambda_min_mse = grid[best];
  const double cutoff = out.mean_mse[best] + out.standard_error[best];
  std::size_t one_se = best;
  for (std::size_t k = 0; k <= best; ++k)
    if (out.mean_mse[k] <= cutoff) {
      one_se = k;
      break;
    }
  out.lambda_1se = grid[one_se];

  // Full-data fit along the path down to lambda_min_mse.
  const LassoDesign full(x);
  std::vector<double> beta(p, 0.0);
  LassoSolution sol;
  for (std::size_t k = 0; k <= best; ++k) {
    sol = lasso_coordinate_descent(full, y, grid[k], options.solver, std::span<const double>(beta));
    beta = sol.beta;
  }
  const auto fit = matvec(x, std::span<const double>(beta));
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) rss += (y[i] - fit[i]) * (y[i] - fit[i]);
  out.support_size = static_cast<std::size_t>(std::count_if(beta.begin(), beta.end(), [](double b) { return b != 0.0; }));
  const double denom = std::max(1.0, static_cast<double>(n) - static_cast<double>(out.support_size));
  out.sigma2 = rss / denom;
  return out;
}

inline CvResult cv_lasso_variance(const DenseMatrix& x, std::span<const double> y, std::uint64_t seed,
                                  const CvOptions& options = {}) {
  const auto grid = default_lambda_grid(x, y);
  return cv_lasso_variance(x, y, grid, seed, options);
}

}  // namespace gve
