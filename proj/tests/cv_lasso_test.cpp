#include <gtest/gtest.h>

#include "gve/cv_lasso.hpp"
#include "gve/simulation.hpp"
#include "test_support.hpp"

namespace gve {
namespace {

TEST(LambdaGrid, DefaultPath) {
  const auto x = testing::random_gaussian(20, 30, 1);
  const auto y = testing::random_vector(20, 2);
  const auto grid = default_lambda_grid(x, y);
  ASSERT_EQ(grid.size(), 100u);
  const auto xty = transpose_matvec(x, std::span<const double>(y));
  double inf = 0;
  for (double v : xty) inf = std::max(inf, std::abs(v));
  EXPECT_DOUBLE_EQ(grid.front(), 2 * inf);
  EXPECT_NEAR(grid.back(), 2e-3 * inf, 1e-12 * inf);
  for (std::size_t k = 1; k < grid.size(); ++k) EXPECT_LT(grid[k], grid[k - 1]);
}

TEST(CvLasso, Deterministic) {
  const auto inst = generate_instance({60, 100, 0.3, 2.0, 1.0, Ensemble::gaussian, 7});
  const auto a = cv_lasso_variance(inst.x, inst.y, 11);
  const auto b = cv_lasso_variance(inst.x, inst.y, 11);
  EXPECT_EQ(a.sigma2, b.sigma2);
  EXPECT_EQ(a.lambda_min_mse, b.lambda_min_mse);
  EXPECT_EQ(a.lambda_1se, b.lambda_1se);
  EXPECT_EQ(a.fold_mse, b.fold_mse);
}

TEST(CvLasso, OneSeRuleAndMinimizer) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = generate_instance({50, 80, 0.3, 3.0, 1.0, Ensemble::gaussian, 100 + seed});
    const auto r = cv_lasso_variance(inst.x, inst.y, seed);
    EXPECT_GE(r.lambda_1se, r.lambda_min_mse);
    const double best = *std::min_element(r.mean_mse.begin(), r.mean_mse.end());
    const auto at = std::find(r.lambda_grid.begin(), r.lambda_grid.end(), r.lambda_min_mse) - r.lambda_grid.begin();
    EXPECT_EQ(r.mean_mse[at], best);
    EXPECT_EQ(r.fold_mse.size(), r.lambda_grid.size());
    EXPECT_EQ(r.fold_mse.front().size(), 10u);
  }
}

// The in-range rate is about 0.94 (measured over 200 instances); 16/20 sits
// roughly three binomial standard deviations below the expected count.
TEST(CvLasso, PureNoiseVarianceInRange) {
  int inside = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto inst = generate_instance({100, 200, 0.1, 0.0, 1.0, Ensemble::gaussian, 500 + t});
    const double s2 = cv_lasso_variance(inst.x, inst.y, t).sigma2;
    inside += (s2 >= 0.6 && s2 <= 1.4) ? 1 : 0;
  }
  EXPECT_GE(inside, 16);
}

TEST(CvLasso, NoiselessSeparableCaseHasSmallVariance) {
  // Orthonormal design, no noise: the fit interpolates as lambda shrinks.
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto inst = generate_instance({40, 40, 0.3, 5.0, 0.0, Ensemble::orthonormal, 900 + t});
    EXPECT_LE(cv_lasso_variance(inst.x, inst.y, t).sigma2, 0.05);
  }
}

TEST(CvLasso, RejectsBadArguments) {
  const auto x = testing::random_gaussian(5, 3, 1);
  const std::vector<double> y(5, 1.0);
  const std::vector<double> grid{1.0, 0.5};
  CvOptions opts;
  opts.folds = 1;
  EXPECT_THROW(cv_lasso_variance(x, y, grid, 0, opts), InvalidInput);
  opts.folds = 6;
  EXPECT_THROW(cv_lasso_variance(x, y, grid, 0, opts), InvalidInput);
  const std::vector<double> ascending{0.5, 1.0};
  EXPECT_THROW(cv_lasso_variance(x, y, ascending, 0, CvOptions{2, {}}), InvalidInput);
  const std::vector<double> empty;
  EXPECT_THROW(cv_lasso_variance(x, y, empty, 0, CvOptions{2, {}}), InvalidInput);
}

}  // namespace
}  // namespace gve
