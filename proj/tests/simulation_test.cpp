#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gve/simulation.hpp"

namespace gve {
namespace {

TEST(Sparsity, CeilOfPower) {
  EXPECT_EQ(sparsity_level(100, 0.5, 1000), 10u);
  EXPECT_EQ(sparsity_level(100, 0.1, 1000), 2u);  // 100^0.1 = 1.58
  EXPECT_EQ(sparsity_level(100, 0.3, 1000), 4u);  // 3.98
  EXPECT_EQ(sparsity_level(100, 1.0, 1000), 100u);
  EXPECT_EQ(sparsity_level(100, 0.0, 1000), 1u);
  EXPECT_EQ(sparsity_level(100, 1.0, 50), 50u);
}

TEST(Design, GaussianEntryVariance) {
  const auto x = generate_design(100, 1000, Ensemble::gaussian, 3);
  double sum = 0, sq = 0;
  for (double v : x.data()) {
    sum += v;
    sq += v * v;
  }
  const double m = static_cast<double>(x.data().size());
  const double var = sq / m - (sum / m) * (sum / m);
  EXPECT_GE(var, 0.8 / 100);
  EXPECT_LE(var, 1.2 / 100);
}

TEST(Design, OrthonormalEnsemble) {
  const auto x = generate_design(64, 64, Ensemble::orthonormal, 4);
  EXPECT_LE(orthonormality_defect(x), 1e-8);
  EXPECT_LE(orthonormality_defect(x.transposed()), 1e-8);
  EXPECT_THROW(generate_design(10, 20, Ensemble::orthonormal, 4), InvalidInput);
}

TEST(Design, Deterministic) {
  EXPECT_EQ(generate_design(20, 30, Ensemble::gaussian, 9), generate_design(20, 30, Ensemble::gaussian, 9));
  EXPECT_FALSE(generate_design(20, 30, Ensemble::gaussian, 9) == generate_design(20, 30, Ensemble::gaussian, 10));
}

TEST(Signal, SupportAndNorm) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto beta = generate_signal(1000, 10, 2.5, seed);
    const auto nnz = std::count_if(beta.begin(), beta.end(), [](double b) { return b != 0.0; });
    EXPECT_EQ(nnz, 10);
    double sq = 0;
    for (double b : beta) sq += b * b;
    EXPECT_NEAR(std::sqrt(sq), 2.5, 1e-12);
  }
  const auto zero = generate_signal(50, 5, 0.0, 1);
  for (double b : zero) EXPECT_EQ(b, 0.0);
}

TEST(Instance, ResponseIsSignalPlusNoise) {
  const auto inst = generate_instance({100, 500, 0.5, 3.0, 2.0, Ensemble::gaussian, 17});
  ASSERT_TRUE(inst.truth);
  const auto fit = matvec(inst.x, std::span<const double>(inst.truth->beta));
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(inst.y[i], fit[i] + inst.truth->eta[i]);
  const auto nnz = std::count_if(inst.truth->beta.begin(), inst.truth->beta.end(), [](double b) { return b != 0.0; });
  EXPECT_EQ(nnz, 10);
}

TEST(Instance, RegenerationIsBitExact) {
  const InstanceConfig cfg{100, 300, 0.3, 1.0, 1.0, Ensemble::gaussian, 99};
  const auto a = generate_instance(cfg);
  const auto b = generate_instance(cfg);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.x, b.x);
}

TEST(Instance, RejectsBadConfig) {
  EXPECT_THROW(generate_instance({100, 300, 0.3, -1.0, 1.0, Ensemble::gaussian, 0}), InvalidInput);
  EXPECT_THROW(generate_instance({100, 300, 0.3, 1.0, -1.0, Ensemble::gaussian, 0}), InvalidInput);
  EXPECT_THROW(generate_instance({0, 300, 0.3, 1.0, 1.0, Ensemble::gaussian, 0}), InvalidInput);
}

TEST(Laplace, QuantilesMatchInverseCdf) {
  Rng rng(5);
  std::vector<double> draws(200000);
  for (double& d : draws) d = sample_laplace(rng);
  std::sort(draws.begin(), draws.end());
  auto quantile = [&](double q) { return draws[static_cast<std::size_t>(q * draws.size())]; };
  EXPECT_NEAR(quantile(0.5), 0.0, 0.01);
  EXPECT_NEAR(quantile(0.75), std::log(2.0), 0.02);
  EXPECT_NEAR(quantile(0.25), -std::log(2.0), 0.02);
  EXPECT_NEAR(quantile(0.95), -std::log(0.1), 0.05);
}

TEST(Roster, NamesRoundTrip) {
  for (auto k : default_roster()) EXPECT_EQ(parse_estimator(to_string(k)), k);
  EXPECT_EQ(parse_estimator("window"), EstimatorKind::fast);
  EXPECT_EQ(parse_estimator("window-svd"), EstimatorKind::svd);
  EXPECT_THROW(parse_estimator("mom"), InvalidInput);
}

TEST(Grid, RowCountAndOrder) {
  const std::vector<std::size_t> ps{100, 200};
  const std::vector<double> betas{0.0, 1.0};
  const std::vector<double> alphas{0.1};
  const auto grid = make_grid(ps, betas, alphas, 50, 1.0);
  const std::vector<EstimatorKind> methods{EstimatorKind::fast, EstimatorKind::oracle};
  const auto rows = run_grid(grid, methods, 3, 7, 1);
  ASSERT_EQ(rows.size(), 4u * 3u * 2u);
  EXPECT_EQ(rows[0].method, "fast");
  EXPECT_EQ(rows[1].method, "oracle");
  EXPECT_EQ(rows[0].seed, rows[1].seed);
  EXPECT_EQ(rows[2].trial, 1u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.ok()) << r.status;
    EXPECT_EQ(r.runtime_us, 0u);
  }
  EXPECT_EQ(rows.back().p, 200u);
  EXPECT_EQ(rows.back().beta_norm, 1.0);
}

TEST(Grid, SmallestRun) {
  const std::vector<InstanceConfig> grid{{100, 100, 0.1, 0.0, 1.0, Ensemble::gaussian, 0}};
  const std::vector<EstimatorKind> methods{EstimatorKind::oracle};
  const auto rows = run_grid(grid, methods, 2, 1, 1);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_GT(r.sigma2_hat, 0.5);
    EXPECT_LT(r.sigma2_hat, 1.5);
  }
}

TEST(Grid, WorkerCountDoesNotChangeRows) {
  const std::vector<std::size_t> ps{100, 300};
  const std::vector<double> betas{1.0, 5.0};
  const std::vector<double> alphas{0.1, 0.3};
  const auto grid = make_grid(ps, betas, alphas, 100, 1.0);
  const std::vector<EstimatorKind> methods{EstimatorKind::fast, EstimatorKind::svd_bc, EstimatorKind::oracle};
  const auto one = run_grid(grid, methods, 3, 42, 1);
  const auto many = run_grid(grid, methods, 3, 42, 8);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].method, many[i].method);
    EXPECT_EQ(one[i].seed, many[i].seed);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(one[i].sigma2_hat), std::bit_cast<std::uint64_t>(many[i].sigma2_hat));
  }
}

TEST(Grid, FailuresBecomeErrorRows) {
  // L = 25 needs p / L >= 2, which p = 40 violates; the oracle still runs.
  const std::vector<InstanceConfig> grid{{100, 40, 0.1, 1.0, 1.0, Ensemble::gaussian, 0}};
  const std::vector<EstimatorKind> methods{EstimatorKind::fast, EstimatorKind::oracle};
  const auto rows = run_grid(grid, methods, 2, 3, 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[0].ok());
  EXPECT_EQ(rows[0].status.rfind("error: ", 0), 0u);
  EXPECT_TRUE(std::isnan(rows[0].sigma2_hat));
  EXPECT_TRUE(rows[1].ok());
  const auto summary = summarize(rows);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0].failures, 2u);
  EXPECT_EQ(summary[0].count, 0u);
  EXPECT_TRUE(std::isnan(summary[0].bias));
  EXPECT_EQ(summary[1].failures, 0u);
}

TEST(Grid, RejectsEmptyInputs) {
  const std::vector<InstanceConfig> none;
  const std::vector<InstanceConfig> grid{{}};
  const std::vector<EstimatorKind> methods{EstimatorKind::oracle};
  const std::vector<EstimatorKind> no_methods;
  EXPECT_THROW(run_grid(none, methods, 1, 0, 1), InvalidInput);
  EXPECT_THROW(run_grid(grid, no_methods, 1, 0, 1), InvalidInput);
  EXPECT_THROW(run_grid(grid, methods, 0, 0, 1), InvalidInput);
}

ReportRow row_with(double hat, double truth = 1.0) {
  ReportRow r;
  r.method = "svd";
  r.n = 100;
  r.p = 1000;
  r.sigma2_true = truth;
  r.sigma2_hat = hat;
  return r;
}

TEST(Summarize, HandExamples) {
  const std::vector<ReportRow> single{row_with(1.0)};
  const auto s1 = summarize(single);
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_EQ(s1[0].bias, 0.0);
  EXPECT_EQ(s1[0].std_dev, 0.0);

  const std::vector<ReportRow> pair{row_with(0.9), row_with(1.1)};
  const auto s2 = summarize(pair);
  EXPECT_NEAR(s2[0].bias, 0.0, 1e-15);
  EXPECT_NEAR(s2[0].std_dev, std::sqrt(0.02), 1e-12);
  EXPECT_NEAR(s2[0].mean_error, 0.1, 1e-12);
  EXPECT_NEAR(s2[0].median_relative_error, 0.1, 1e-12);

  EXPECT_THROW(summarize(std::span<const ReportRow>{}), InvalidInput);
}

TEST(Summarize, ZeroTruthUsesFloor) {
  const std::vector<ReportRow> rows{row_with(1e-12, 0.0)};
  EXPECT_NEAR(summarize(rows)[0].median_relative_error, 1.0, 1e-12);
}

// Laurent-Massart interval for a chi-square with d degrees of freedom.
TEST(ChiSquare, ConcentrationCoverage) {
  const int d = 100;
  const double t = 3;
  Rng rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int draws = 10000;
  int inside = 0;
  for (int k = 0; k < draws; ++k) {
    double chi = 0;
    for (int i = 0; i < d; ++i) {
      const double z = normal(rng);
      chi += z * z;
    }
    inside += (chi >= d - 2 * std::sqrt(d * t) && chi <= d + 2 * std::sqrt(d * t) + 2 * t) ? 1 : 0;
  }
  EXPECT_GE(static_cast<double>(inside) / draws, 1 - 2 * std::exp(-t) - 0.02);
}

}  // namespace
}  // namespace gve
