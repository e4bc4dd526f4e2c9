// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_COMPLEX_MATRIX_HPP
#define BCSIM_COMPLEX_MATRIX_HPP

#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace bcsim {

using Complex = std::complex<double>;

/// Thrown by inverse() / build_precoder() when a pivot falls below the
/// relative singularity tolerance. Monte-Carlo drivers catch this and
/// redraw the trial.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense complex matrix, row-major storage. Sized for the small systems
/// handled here (channels and precoders up to a few dozen rows), not as a
/// general linear-algebra container.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  /// Zero-filled rows x cols matrix. Dimensions must be positive.
  ComplexMatrix(int rows, int cols);

  /// Takes ownership of row-major entries; size must equal rows*cols.
  ComplexMatrix(int rows, int cols, std::vector<Complex> entries);

  static ComplexMatrix identity(int n);

  /// Convenience for tests and small fixtures: one inner list per row.
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(int r, int c) noexcept { return entries_[idx(r, c)]; }
  const Complex& operator()(int r, int c) const noexcept {
    return entries_[idx(r, c)];
  }

  std::span<Complex> row(int r) noexcept {
    return {entries_.data() + idx(r, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<const Complex> row(int r) const noexcept {
    return {entries_.data() + idx(r, 0), static_cast<std::size_t>(cols_)};
  }

  const std::vector<Complex>& entries() const noexcept { return entries_; }

  /// True when no entry holds a NaN or infinity in either component.
  bool all_finite() const noexcept;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t idx(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> entries_;
};

/// Hermitian transpose: result(i,j) = conj(a(j,i)).
ComplexMatrix conj_transpose(const ComplexMatrix& a);

/// Standard complex matrix product; throws std::invalid_argument on a
/// dimension mismatch.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Inverse of a square matrix by Gaussian elimination with partial pivoting
/// on entry magnitude. A pivot below 1e-12 times the largest magnitude of
/// the input raises SingularMatrixError. For condition numbers under ~1e6
/// the residual ||A*inverse(A) - I||_F stays below 1e-10.
ComplexMatrix inverse(const ComplexMatrix& a);

/// Determinant via the same pivoted elimination (sign-tracked pivot
/// product). An exactly zero pivot short-circuits to 0.
Complex determinant(const ComplexMatrix& a);

/// Sum of the real parts of the diagonal. Meaningful for the Hermitian
/// positive semidefinite arguments it is used on (e.g. W^H W).
double trace_real(const ComplexMatrix& a);

/// Eigenvalues of a Hermitian matrix, ascending, via cyclic complex Jacobi
/// rotations. The input must be Hermitian within 1e-10 per entry. Converged
/// when the off-diagonal Frobenius norm drops below 1e-11 times the input
/// Frobenius norm; throws std::runtime_error after 100 sweeps without
/// convergence (not observed for the matrix sizes used here).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

double frobenius_norm(const ComplexMatrix& a);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex factor);

}  // namespace bcsim

#endif  // BCSIM_COMPLEX_MATRIX_HPP
