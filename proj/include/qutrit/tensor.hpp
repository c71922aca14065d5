// Copyright 2026 The qutrit-qae Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small dense complex linear algebra: the matrices here are 3x3, 9x9 or 27x27,
// plus state vectors of at most a few thousand entries.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qutrit {

using Complex = std::complex<double>;
using namespace std::complex_literals;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kExactTol = 1e-12;

/// Thrown for any precondition violation on caller-supplied input.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim) : data_(dim, Complex{0.0, 0.0}) {}
  ComplexVector(std::initializer_list<Complex> values) : data_(values) {}
  explicit ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {}

  std::size_t dim() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  double norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  static ComplexVector basis(std::size_t dim, std::size_t k) {
    ComplexVector v(dim);
    v[k] = 1.0;
    return v;
  }

  friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

 private:
  std::vector<Complex> data_;
};

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner(const ComplexVector& a, const ComplexVector& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("inner: dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline ComplexVector operator*(Complex s, const ComplexVector& v) {
  ComplexVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = s * v[i];
  return out;
}

inline ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("subtract: dimension mismatch");
  ComplexVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

/// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  /// Builds from nested rows; all rows must have equal length.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidArgument("ComplexMatrix: ragged rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static ComplexMatrix from_columns(std::span<const ComplexVector> cols) {
    if (cols.empty()) return {};
    ComplexMatrix m(cols[0].dim(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].dim() != m.rows_) throw InvalidArgument("from_columns: ragged columns");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexVector column(std::size_t j) const {
    ComplexVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Complex trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidArgument("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                          " vs " + std::to_string(b.rows()) + ")");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

inline ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
  if (a.cols() != v.dim()) throw InvalidArgument("matvec: dimension mismatch");
  ComplexVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& z : out.entries()) z *= s;
  return out;
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("add: shape mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < a.entries().size(); ++i) out.entries()[i] += b.entries()[i];
  return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a + Complex{-1.0, 0.0} * b;
}

/// Kronecker product; a acts on the more significant index.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

inline double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bool is_unitary(const ComplexMatrix& a, double tol = kExactTol) {
  if (!a.is_square()) return false;
  return max_abs_diff(a.adjoint() * a, ComplexMatrix::identity(a.rows())) < tol;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kExactTol) {
  if (!a.is_square()) return false;
  return max_abs_diff(a, a.adjoint()) < tol;
}

struct QrResult {
  ComplexMatrix q;
  ComplexMatrix r;
  /// Columns of q that came from the canonical-basis fallback because the
  /// corresponding input column was linearly dependent on earlier ones.
  std::vector<std::size_t> fallback_columns;

  bool used_fallback() const noexcept { return !fallback_columns.empty(); }
};

namespace detail {

inline constexpr double kDependenceTol = 1e-10;

// Removes the components of v along the orthonormal set, twice (CGS2), and
// accumulates the projection coefficients.
inline void orthogonalize(ComplexVector& v, std::span<const ComplexVector> basis,
                          std::span<Complex> coeffs) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Complex c = inner(basis[i], v);
      for (std::size_t k = 0; k < v.dim(); ++k) v[k] -= c * basis[i][k];
      if (!coeffs.empty()) coeffs[i] += c;
    }
  }
}

}  // namespace detail

/// Gram-Schmidt QR of a square matrix with diag(R) real and nonnegative.
/// A column that is (numerically) in the span of the preceding ones gets a
/// zero diagonal in R; the matching column of Q is completed from the first
/// canonical basis vector with the largest residual, and recorded in
/// fallback_columns.
inline QrResult qr_decompose(const ComplexMatrix& a) {
  if (!a.is_square()) throw InvalidArgument("qr_decompose: matrix must be square");
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (const auto& z : a.entries()) scale = std::max(scale, std::abs(z));
  const double tol = detail::kDependenceTol * std::max(scale, 1.0);

  QrResult out{ComplexMatrix(n, n), ComplexMatrix(n, n), {}};
  std::vector<ComplexVector> qs(n);
  std::vector<ComplexVector> filled;
  std::vector<std::size_t> slot;
  std::vector<Complex> coeffs(n);
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector v = a.column(j);
    std::fill(coeffs.begin(), coeffs.end(), Complex{0.0, 0.0});
    detail::orthogonalize(v, filled, std::span<Complex>(coeffs.data(), filled.size()));
    for (std::size_t i = 0; i < filled.size(); ++i) out.r(slot[i], j) = coeffs[i];
    const double nv = v.norm();
    if (nv > tol) {
      out.r(j, j) = nv;
      qs[j] = (1.0 / nv) * v;
      filled.push_back(qs[j]);
      slot.push_back(j);
    } else {
      out.fallback_columns.push_back(j);
    }
  }
  // Deficient slots are completed last so they never absorb a direction a
  // later column needs.
  for (std::size_t j : out.fallback_columns) {
    ComplexVector best;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      ComplexVector e = ComplexVector::basis(n, k);
      detail::orthogonalize(e, filled, {});
      if (const double ne = e.norm(); ne > best_norm + 1e-12) {
        best_norm = ne;
        best = std::move(e);
      }
    }
    qs[j] = (1.0 / best_norm) * best;
    filled.push_back(qs[j]);
  }
  out.q = ComplexMatrix::from_columns(qs);
  return out;
}

/// Orthonormalizes three linearly independent 3-vectors in order.
inline std::array<ComplexVector, 3> gram_schmidt(const ComplexVector& u1, const ComplexVector& u2,
                                                 const ComplexVector& u3) {
  const std::array<const ComplexVector*, 3> in{&u1, &u2, &u3};
  std::array<ComplexVector, 3> out;
  for (std::size_t j = 0; j < 3; ++j) {
    if (in[j]->dim() != 3) throw InvalidArgument("gram_schmidt: vectors must have dimension 3");
    ComplexVector v = *in[j];
    detail::orthogonalize(v, std::span<const ComplexVector>(out.data(), j), {});
    const double nv = v.norm();
    if (nv < detail::kDependenceTol) {
      throw InvalidArgument("gram_schmidt: input vector " + std::to_string(j + 1) +
                            " is linearly dependent on the previous ones");
    }
    out[j] = (1.0 / nv) * v;
  }
  return out;
}

}  // namespace qutrit
