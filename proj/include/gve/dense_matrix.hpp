#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gve/error.hpp"

namespace gve {

/**
 * Row-major dense real matrix.
 *
 * Owns its storage; entries are finite by construction when built from a
 * data vector. Element access is unchecked, shape-level operations check
 * their arguments and throw InvalidInput.
 */
template <std::floating_point Real>
class BasicDenseMatrix {
 public:
  using value_type = Real;

  BasicDenseMatrix() = default;

  BasicDenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

  BasicDenseMatrix(std::size_t rows, std::size_t cols, std::vector<Real> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    detail::require(data_.size() == rows_ * cols_, "matrix data length must equal rows*cols");
    detail::require(std::all_of(data_.begin(), data_.end(), [](Real x) { return std::isfinite(x); }),
                    "matrix entries must be finite");
  }

  static BasicDenseMatrix identity(std::size_t n) {
    BasicDenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Real& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  Real operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<Real> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const Real> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  std::span<Real> data() noexcept { return data_; }
  std::span<const Real> data() const noexcept { return data_; }

  // Copy of columns [first, first + count).
  BasicDenseMatrix columns(std::size_t first, std::size_t count) const {
    detail::require(first + count <= cols_, "column range out of bounds");
    BasicDenseMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      std::copy_n(data_.begin() + i * cols_ + first, count, out.data_.begin() + i * count);
    return out;
  }

  // Copy of an arbitrary column selection, in the given order.
  BasicDenseMatrix columns(std::span<const std::size_t> indices) const {
    BasicDenseMatrix out(rows_, indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c)
      detail::require(indices[c] < cols_, "column index out of bounds");
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t c = 0; c < indices.size(); ++c) out(i, c) = (*this)(i, indices[c]);
    return out;
  }

  BasicDenseMatrix transposed() const {
    BasicDenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const BasicDenseMatrix&, const BasicDenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

using DenseMatrix = BasicDenseMatrix<double>;

template <std::floating_point Real>
std::vector<Real> matvec(const BasicDenseMatrix<Real>& a, std::span<const Real> v) {
  detail::require(v.size() == a.cols(), "matvec: vector length must equal matrix cols");
  std::vector<Real> out(a.rows(), Real(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    Real acc = 0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * v[j];
    out[i] = acc;
  }
  return out;
}

// A^T u without materializing the transpose.
template <std::floating_point Real>
std::vector<Real> transpose_matvec(const BasicDenseMatrix<Real>& a, std::span<const Real> u) {
  detail::require(u.size() == a.rows(), "transpose_matvec: vector length must equal matrix rows");
  std::vector<Real> out(a.cols(), Real(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const Real ui = u[i];
    if (ui == Real(0)) continue;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j] * ui;
  }
  return out;
}

template <std::floating_point Real>
BasicDenseMatrix<Real> multiply(const BasicDenseMatrix<Real>& a, const BasicDenseMatrix<Real>& b) {
  detail::require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  BasicDenseMatrix<Real> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Real aik = a(i, k);
      if (aik == Real(0)) continue;
      const auto brow = b.row(k);
      auto crow = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  return c;
}

// A^T A.
template <std::floating_point Real>
BasicDenseMatrix<Real> gram(const BasicDenseMatrix<Real>& a) {
  const std::size_t p = a.cols();
  BasicDenseMatrix<Real> g(p, p);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < p; ++j) {
      const Real rj = r[j];
      for (std::size_t k = j; k < p; ++k) g(j, k) += rj * r[k];
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < j; ++k) g(j, k) = g(k, j);
  return g;
}

template <std::floating_point Real>
Real max_abs(const BasicDenseMatrix<Real>& a) {
  Real m = 0;
  for (Real x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

template <std::floating_point Real>
Real frobenius_norm(const BasicDenseMatrix<Real>& a) {
  Real s = 0;
  for (Real x : a.data()) s += x * x;
  return std::sqrt(s);
}

// max |A^T A - I|, the orthonormality defect of A's columns.
template <std::floating_point Real>
Real orthonormality_defect(const BasicDenseMatrix<Real>& a) {
  auto g = gram(a);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= Real(1);
  return max_abs(g);
}

template <std::floating_point Real>
Real norm2(std::span<const Real> v) {
  Real s = 0;
  for (Real x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace gve
