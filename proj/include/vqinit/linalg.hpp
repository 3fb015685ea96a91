// Copyright 2026 The vqinit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vqinit/error.hpp"

namespace vqinit {

/// Row-major dense real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static RealMatrix identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.cols() == b.rows(), "matmul: inner dimension mismatch");
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline RealMatrix transpose(const RealMatrix& a) {
  RealMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// max |a_ij - b_ij|
inline double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

struct QrResult {
  RealMatrix q;
  RealMatrix r;
};

/// Householder QR of a square matrix, A = QR with Q orthogonal and R upper
/// triangular. Signs are fixed so that diag(R) >= 0, which makes the
/// factorization unique for non-singular A.
inline QrResult qr_decompose(const RealMatrix& a) {
  detail::require(a.rows() == a.cols(), "qr_decompose: matrix must be square");
  for (double x : a.data()) detail::require(std::isfinite(x), "qr_decompose: non-finite entry");
  const std::size_t n = a.rows();
  RealMatrix r = a;
  // Q^T is accumulated by applying each reflector to the identity from the
  // left; rows are contiguous, which keeps the update loops unit-stride.
  RealMatrix qt = RealMatrix::identity(n);
  std::vector<double> v(n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    double norm_sq = 0.0;
    for (std::size_t i = k; i < n; ++i) norm_sq += r(i, k) * r(i, k);
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) continue;
    const double alpha = r(k, k) > 0.0 ? -norm : norm;
    for (std::size_t i = k; i < n; ++i) v[i] = r(i, k);
    v[k] -= alpha;
    double v_sq = 0.0;
    for (std::size_t i = k; i < n; ++i) v_sq += v[i] * v[i];
    if (v_sq == 0.0) continue;
    const double scale = 2.0 / v_sq;

    // R <- (I - scale v v^T) R, columns k..n-1.
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * r(i, j);
      dot *= scale;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= dot * v[i];
    }
    for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;

    // Q^T <- (I - scale v v^T) Q^T
    std::vector<double> w(n, 0.0);
    for (std::size_t i = k; i < n; ++i) {
      const auto row = qt.row(i);
      for (std::size_t j = 0; j < n; ++j) w[j] += v[i] * row[j];
    }
    for (std::size_t i = k; i < n; ++i) {
      auto row = qt.row(i);
      const double f = scale * v[i];
      for (std::size_t j = 0; j < n; ++j) row[j] -= f * w[j];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      for (std::size_t j = i; j < n; ++j) r(i, j) = -r(i, j);
      for (double& x : qt.row(i)) x = -x;
    }
  }
  return {transpose(qt), std::move(r)};
}

}  // namespace vqinit
