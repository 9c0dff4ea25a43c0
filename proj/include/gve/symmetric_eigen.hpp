#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"

namespace gve {

inline constexpr int kJacobiMaxSweeps = 30;

template <std::floating_point Real>
struct SymmetricEigen {
  std::vector<Real> values;          // non-increasing
  BasicDenseMatrix<Real> vectors;    // column k pairs with values[k]
  int sweeps = 0;
};

/**
 * Cyclic Jacobi eigensolver for a symmetric matrix.
 *
 * Rotations are applied until the off-diagonal mass is at rounding level.
 * Eigenvalues come back non-increasing; each eigenvector is signed so that
 * its largest-magnitude component is positive. Throws InvalidInput for
 * non-square or asymmetric input (relative asymmetry above 1e-12) and
 * ConvergenceFailure when the off-diagonal norm still exceeds tol*||G||_F
 * after kJacobiMaxSweeps sweeps.
 */
template <std::floating_point Real>
SymmetricEigen<Real> symmetric_eigendecomposition(const BasicDenseMatrix<Real>& g, Real tol = Real(1e-12)) {
  const std::size_t n = g.rows();
  detail::require(n >= 1 && g.cols() == n, "eigendecomposition needs a non-empty square matrix");
  const Real scale = std::max(Real(1), max_abs(g));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      detail::require(std::abs(g(i, j) - g(j, i)) <= Real(1e-12) * scale,
                      "eigendecomposition needs a symmetric matrix");

  BasicDenseMatrix<Real> a = g;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = (g(i, j) + g(j, i)) / 2;
  auto v = BasicDenseMatrix<Real>::identity(n);

  const Real norm = frobenius_norm(a);
  const Real eps = std::numeric_limits<Real>::epsilon();
  auto off_norm = [&] {
    Real s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2 * s);
  };

  int sweep = 0;
  for (; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_norm() <= eps * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Real apq = a(p, q);
        if (apq == Real(0)) continue;
        const Real app = a(p, p);
        const Real aqq = a(q, q);
        // Skip rotations that cannot change the diagonal in working precision.
        if (std::abs(apq) <= eps * Real(0.5) * std::sqrt(std::abs(app * aqq))) {
          a(p, q) = a(q, p) = 0;
          continue;
        }
        const Real theta = (aqq - app) / (2 * apq);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Real c = 1 / std::sqrt(t * t + 1);
        const Real s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const Real akp = a(k, p);
          const Real akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real apk = a(p, k);
          const Real aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0;
        for (std::size_t k = 0; k < n; ++k) {
          const Real vkp = v(k, p);
          const Real vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  const Real residual = off_norm();
  if (residual > tol * norm)
    throw ConvergenceFailure("Jacobi eigensolver did not converge", static_cast<double>(residual));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SymmetricEigen<Real> out;
  out.values.resize(n);
  out.vectors = BasicDenseMatrix<Real>(n, n);
  out.sweeps = sweep;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(arg, src))) arg = i;
    const Real sign = v(arg, src) < 0 ? Real(-1) : Real(1);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

}  // namespace gve
