// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "bcsim/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

namespace bcsim {

namespace {

constexpr double kSingularRelTol = 1e-12;
constexpr double kJacobiRelTol = 1e-11;
constexpr double kHermitianTol = 1e-10;
constexpr int kJacobiMaxSweeps = 100;

void require_square(const ComplexMatrix& a, const char* op) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(op) +
                                ": square nonempty matrix required");
  }
}

double max_abs_entry(const ComplexMatrix& a) {
  double m = 0.0;
  for (const Complex& v : a.entries()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }
  if (entries_.size() !=
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw std::invalid_argument("ComplexMatrix: entry count mismatch");
  }
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const int r = static_cast<int>(rows.size());
  if (r == 0) throw std::invalid_argument("from_rows: no rows");
  const int c = static_cast<int>(rows.begin()->size());
  ComplexMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) {
      throw std::invalid_argument("from_rows: ragged rows");
    }
    int j = 0;
    for (const Complex& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool ComplexMatrix::all_finite() const noexcept {
  for (const Complex& v : entries_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
  if (a.empty()) throw std::invalid_argument("conj_transpose: empty matrix");
  ComplexMatrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out(j, i) = std::conj(a(i, j));
    }
  }
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("matmul: empty matrix");
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (int j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  require_square(a, "inverse");
  const int n = a.rows();
  const double scale = max_abs_entry(a);
  if (scale == 0.0) throw SingularMatrixError("inverse: zero matrix");
  const double tol = kSingularRelTol * scale;

  ComplexMatrix work = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);

  for (int col = 0; col < n; ++col) {
    int pivot_row = col;
    double pivot_mag = std::abs(work(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double mag = std::abs(work(r, col));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = r;
      }
    }
    if (!(pivot_mag >= tol)) {
      throw SingularMatrixError("inverse: pivot below singularity tolerance");
    }
    if (pivot_row != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(pivot_row, j), work(col, j));
        std::swap(inv(pivot_row, j), inv(col, j));
      }
    }
    const Complex pivot = work(col, col);
    const Complex inv_pivot = 1.0 / pivot;
    for (int j = 0; j < n; ++j) {
      work(col, j) *= inv_pivot;
      inv(col, j) *= inv_pivot;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex factor = work(r, col);
      if (factor == Complex{}) continue;
      for (int j = 0; j < n; ++j) {
        work(r, j) -= factor * work(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

Complex determinant(const ComplexMatrix& a) {
  require_square(a, "determinant");
  const int n = a.rows();
  ComplexMatrix work = a;
  Complex det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot_row = col;
    double pivot_mag = std::abs(work(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double mag = std::abs(work(r, col));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = r;
      }
    }
    if (pivot_mag == 0.0) return Complex{};
    if (pivot_row != col) {
      for (int j = col; j < n; ++j) std::swap(work(pivot_row, j), work(col, j));
      det = -det;
    }
    const Complex pivot = work(col, col);
    det *= pivot;
    for (int r = col + 1; r < n; ++r) {
      const Complex factor = work(r, col) / pivot;
      if (factor == Complex{}) continue;
      for (int j = col; j < n; ++j) {
        work(r, j) -= factor * work(col, j);
      }
    }
  }
  return det;
}

double trace_real(const ComplexMatrix& a) {
  require_square(a, "trace_real");
  double t = 0.0;
  for (int i = 0; i < a.rows(); ++i) t += a(i, i).real();
  return t;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  require_square(a, "hermitian_eigenvalues");
  const int n = a.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > kHermitianTol) {
        throw std::invalid_argument(
            "hermitian_eigenvalues: matrix is not Hermitian");
      }
    }
  }

  ComplexMatrix w = a;
  // Symmetrize exactly so roundoff in the input cannot accumulate through
  // the rotations.
  for (int i = 0; i < n; ++i) {
    w(i, i) = Complex{w(i, i).real(), 0.0};
    for (int j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (w(i, j) + std::conj(w(j, i)));
      w(i, j) = avg;
      w(j, i) = std::conj(avg);
    }
  }

  const double fro = frobenius_norm(a);
  const double off_tol = kJacobiRelTol * fro;

  auto off_diag_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) s += std::norm(w(i, j));
      }
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_diag_norm() > off_tol) {
    if (++sweep > kJacobiMaxSweeps) {
      throw std::runtime_error("hermitian_eigenvalues: no convergence");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = w(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        // Unitary 2x2 rotation annihilating w(p,q): a complex Jacobi
        // rotation with phase taken from the off-diagonal entry.
        const Complex ephi = apq / mag;
        const double app = w(p, p).real();
        const double aqq = w(q, q).real();
        const double theta = (app - aqq) / (2.0 * mag);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const Complex wkp = w(k, p);
          const Complex wkq = w(k, q);
          w(k, p) = c * wkp + s * std::conj(ephi) * wkq;
          w(k, q) = -s * ephi * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex wpk = w(p, k);
          const Complex wqk = w(q, k);
          w(p, k) = c * wpk + s * ephi * wqk;
          w(q, k) = -s * std::conj(ephi) * wpk + c * wqk;
        }
        w(p, q) = Complex{};
        w(q, p) = Complex{};
        w(p, p) = Complex{w(p, p).real(), 0.0};
        w(q, q) = Complex{w(q, q).real(), 0.0};
      }
    }
  }

  std::vector<double> lambdas(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) lambdas[static_cast<std::size_t>(i)] = w(i, i).real();
  std::sort(lambdas.begin(), lambdas.end());
  return lambdas;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const Complex& v : a.entries()) s += std::norm(v);
  return std::sqrt(s);
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("add: dimension mismatch");
  }
  ComplexMatrix out = a;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  }
  return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("subtract: dimension mismatch");
  }
  ComplexMatrix out = a;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  }
  return out;
}

ComplexMatrix scale(const ComplexMatrix& a, Complex factor) {
  ComplexMatrix out = a;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(i, j) *= factor;
  }
  return out;
}

}  // namespace bcsim
