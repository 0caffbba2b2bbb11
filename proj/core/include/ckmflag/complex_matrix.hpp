#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ckmflag/errors.hpp"

namespace ckmflag {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Dense row-major complex matrix, sized for mixing-matrix work (n <= 8).
/// Operations never mutate their arguments and return fresh values, so
/// constructed matrices can be shared freely across threads.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Entries are row-major and must all be finite.
  ComplexMatrix(std::size_t rows, std::size_t cols,
                std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<const Complex> entries() const noexcept { return entries_; }
  bool all_finite() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& a);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

/// ab - ba for square matrices of equal size.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Determinant via sign-tracked LU with partial pivoting. Pivoting keeps
/// this usable on near-singular inputs such as commutators.
Complex determinant(const ComplexMatrix& a);

struct LuFactors {
  ComplexMatrix lower;  // unit lower triangular
  ComplexMatrix upper;
};

/// Doolittle factorization without pivoting: a = lower * upper. Requires
/// every leading principal minor to be nonzero; a pivot below
/// pivot_tolerance * ||a||_F raises SingularPivotError naming the 1-based
/// order of the vanishing minor.
LuFactors lu_unpivoted(const ComplexMatrix& a, double pivot_tolerance = 1e-10);

double frobenius_norm(const ComplexMatrix& a);
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||A†A - I||_F, the distance from having orthonormal columns.
double unitarity_defect(const ComplexMatrix& a);

}  // namespace ckmflag
