#include "ckmflag/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ckmflag {

namespace {

std::string shape_string(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw ShapeError("entry count " + std::to_string(entries_.size()) +
                     " does not match shape " + shape_string(*this));
  }
  for (const Complex& z : entries_) {
    if (!is_finite(z)) {
      throw ValidationError("matrix entries must be finite");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) e(i, i) = 1.0;
  return e;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> entries) {
  ComplexMatrix d(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) d(i, i) = entries[i];
  return d;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](Complex z) { return is_finite(z); });
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("cannot multiply " + shape_string(a) + " by " +
                     shape_string(b));
  }
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("cannot add " + shape_string(a) + " and " +
                     shape_string(b));
  }
  ComplexMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("cannot subtract " + shape_string(b) + " from " +
                     shape_string(a));
  }
  ComplexMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw ShapeError("commutator requires square matrices of equal size, got " +
                     shape_string(a) + " and " + shape_string(b));
  }
  return matmul(a, b) - matmul(b, a);
}

Complex determinant(const ComplexMatrix& a) {
  if (!a.is_square()) {
    throw ShapeError("determinant requires a square matrix, got " +
                     shape_string(a));
  }
  // Commutator determinants live close to cancellation, so the
  // elimination runs in extended precision.
  using Long = std::complex<long double>;
  const std::size_t n = a.rows();
  std::vector<Long> u(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      u[i * n + j] = Long(a(i, j).real(), a(i, j).imag());

  long double sign = 1.0L;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    long double pivot_mag = std::abs(u[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double mag = std::abs(u[i * n + k]);
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (pivot_mag == 0.0L) return Complex(0.0, 0.0);
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(u[k * n + j], u[pivot_row * n + j]);
      sign = -sign;
    }
    const Long pivot = u[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Long factor = u[i * n + k] / pivot;
      u[i * n + k] = 0.0L;
      for (std::size_t j = k + 1; j < n; ++j)
        u[i * n + j] -= factor * u[k * n + j];
    }
  }
  Long det(sign, 0.0L);
  for (std::size_t k = 0; k < n; ++k) det *= u[k * n + k];
  return Complex(static_cast<double>(det.real()),
                 static_cast<double>(det.imag()));
}

LuFactors lu_unpivoted(const ComplexMatrix& a, double pivot_tolerance) {
  if (!a.is_square()) {
    throw ShapeError("lu_unpivoted requires a square matrix, got " +
                     shape_string(a));
  }
  const std::size_t n = a.rows();
  const double threshold = pivot_tolerance * frobenius_norm(a);
  ComplexMatrix lower = ComplexMatrix::identity(n);
  ComplexMatrix upper = a;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex pivot = upper(k, k);
    if (std::abs(pivot) <= threshold) {
      throw SingularPivotError(
          k + 1, "leading principal minor of order " + std::to_string(k + 1) +
                     " is degenerate (|pivot| = " +
                     std::to_string(std::abs(pivot)) + ")");
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = upper(i, k) / pivot;
      lower(i, k) = factor;
      upper(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j)
        upper(i, j) -= factor * upper(k, j);
    }
  }
  return {std::move(lower), std::move(upper)};
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const Complex& z : a.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("cannot compare " + shape_string(a) + " and " +
                     shape_string(b));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

double unitarity_defect(const ComplexMatrix& a) {
  return frobenius_norm(matmul(adjoint(a), a) -
                        ComplexMatrix::identity(a.cols()));
}

}  // namespace ckmflag
