#include <gtest/gtest.h>

#include "gve/block_orthogonalizer.hpp"
#include "test_support.hpp"

namespace gve {
namespace {

// Singular values of the symmetric PSD product Z^T X via the Gram route.
std::vector<double> product_singular_values(const DenseMatrix& z, const DenseMatrix& x) {
  return testing::gram_singular_values(multiply(z.transposed(), x));
}

TEST(BlockOrthonormalFactor, OrthonormalBlockIsUnchanged) {
  const auto q = testing::random_orthogonal(8, 11).columns(0, 3);
  const auto f = orthonormal_factor(q);
  EXPECT_LT(testing::max_abs_diff(f.z, q), 1e-10);
  for (double s : f.singular_values) EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(BlockOrthonormalFactor, ScalingIsRemoved) {
  const auto q = testing::random_orthogonal(6, 12).columns(1, 4);
  DenseMatrix scaled = q;
  for (double& v : scaled.data()) v *= 7.5;
  const auto f = orthonormal_factor(scaled);
  EXPECT_LT(testing::max_abs_diff(f.z, q), 1e-10);
  for (double s : f.singular_values) EXPECT_NEAR(s, 7.5, 1e-12);
}

TEST(BlockOrthonormalFactor, MatchesGramSquareRootOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = testing::random_gaussian(8, 2, 200 + seed);
    const auto f = orthonormal_factor(x);
    EXPECT_LT(orthonormality_defect(f.z), 1e-12);
    EXPECT_LT(testing::max_abs_diff(f.z, testing::gram_polar_factor(x)), 1e-10);
    const auto oracle = testing::gram_singular_values(x);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(f.singular_values[k], oracle[k], 1e-10);
  }
}

TEST(BlockOrthonormalFactor, SharesColumnSpaceAndPreservesSingularValues) {
  const auto x = testing::random_gaussian(30, 10, 5);
  const auto f = orthonormal_factor(x);
  // Projecting X onto span(Z) reproduces X.
  const auto proj = multiply(f.z, multiply(f.z.transposed(), x));
  EXPECT_LT(testing::max_abs_diff(proj, x), 1e-10);
  const auto sv = product_singular_values(f.z, x);
  for (std::size_t k = 0; k < sv.size(); ++k) EXPECT_NEAR(sv[k], f.singular_values[k], 1e-8);
  EXPECT_TRUE(std::is_sorted(f.singular_values.rbegin(), f.singular_values.rend()));
}

TEST(BlockOrthonormalFactor, RankDeficientBlockIsDegenerate) {
  auto x = testing::random_gaussian(10, 3, 6);
  for (std::size_t i = 0; i < 10; ++i) x(i, 2) = x(i, 0);
  EXPECT_THROW(orthonormal_factor(x), DegenerateBlock);
  EXPECT_THROW(orthonormal_factor(DenseMatrix(4, 2)), DegenerateBlock);
}

TEST(BlockOrthonormalFactor, WidthAboveRowsIsRejected) {
  EXPECT_THROW(orthonormal_factor(testing::random_gaussian(2, 3, 1)), InvalidInput);
}

TEST(BuildRegularizedDesign, OrthonormalDesignIsItsOwnFactor) {
  const auto q = testing::random_orthogonal(12, 21);
  for (std::size_t l : {1u, 3u, 4u, 6u, 12u}) {
    const auto d = build_regularized_design(q, l);
    EXPECT_LT(testing::max_abs_diff(d.z, q), 1e-10) << "L=" << l;
  }
}

TEST(BuildRegularizedDesign, EveryBlockPassesTheOracle) {
  const auto x = testing::random_gaussian(8, 4, 31);
  const auto d = build_regularized_design(x, 2);
  ASSERT_EQ(d.block_count(), 2u);
  for (std::size_t b = 0; b < 2; ++b) {
    const auto zb = d.z.columns(2 * b, 2);
    EXPECT_LT(orthonormality_defect(zb), 1e-12);
    EXPECT_LT(testing::max_abs_diff(zb, testing::gram_polar_factor(x.columns(2 * b, 2))), 1e-10);
  }
}

TEST(BuildRegularizedDesign, TrailingPartialBlock) {
  const auto x = testing::random_gaussian(10, 7, 32);
  const auto d = build_regularized_design(x, 3);
  ASSERT_EQ(d.block_count(), 3u);
  EXPECT_EQ(d.block_singular_values[2].size(), 1u);
  EXPECT_LT(orthonormality_defect(d.z.columns(6, 1)), 1e-14);
}

TEST(BuildRegularizedDesign, DegenerateBlockReportsItsIndex) {
  auto x = testing::random_gaussian(10, 6, 33);
  for (std::size_t i = 0; i < 10; ++i) x(i, 5) = x(i, 4);
  try {
    build_regularized_design(x, 2);
    FAIL() << "expected DegenerateBlock";
  } catch (const DegenerateBlock& e) {
    EXPECT_EQ(e.block_index(), 2u);
  }
}

TEST(BuildRegularizedDesign, WindowAboveRowsIsRejected) {
  EXPECT_THROW(build_regularized_design(testing::random_gaussian(4, 10, 1), 5), InvalidInput);
}

TEST(BuildRegularizedDesign, ParallelMatchesSequentialBitForBit) {
  const auto x = testing::random_gaussian(40, 203, 34);
  const auto seq = build_regularized_design(x, 10);
  DesignOptions opts;
  opts.workers = 4;
  const auto par = build_regularized_design(x, 10, opts);
  EXPECT_EQ(seq.z, par.z);
  EXPECT_EQ(seq.block_singular_values, par.block_singular_values);
}

TEST(BuildRegularizedDesign, RoundTripAndSingularValuesOnGaussianDesigns) {
  for (std::size_t l : {2u, 5u, 16u}) {
    const std::size_t n = 4 * l;
    const auto x = testing::random_gaussian(n, 6 * l, 40 + l, 1.0 / std::sqrt(double(n)));
    const auto d = build_regularized_design(x, l);
    for (std::size_t b = 0; b < d.block_count(); ++b) {
      const auto zb = d.z.columns(b * l, l);
      const auto xb = x.columns(b * l, l);
      EXPECT_LE(orthonormality_defect(zb), 1e-8);
      const auto sv = product_singular_values(zb, xb);
      const auto oracle = testing::gram_singular_values(xb);
      for (std::size_t k = 0; k < l; ++k) EXPECT_NEAR(sv[k], oracle[k], 1e-8);
    }
  }
}

}  // namespace
}  // namespace gve
