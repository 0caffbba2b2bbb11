#pragma once

// Test-only reference implementations, kept independent of the code paths
// they check.

#include <random>
#include <vector>

#include "ckmflag/complex_matrix.hpp"
#include "ckmflag/flag.hpp"
#include "ckmflag/sampling.hpp"

namespace ckmflag::testing {

/// Determinant by recursive cofactor expansion along the first row.
/// Exponential cost; meant for n <= 4.
inline Complex cofactor_determinant(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  Complex det(0.0, 0.0);
  double sign = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    ComplexMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    det += sign * a(0, j) * cofactor_determinant(minor);
    sign = -sign;
  }
  return det;
}

/// Classical Gram-Schmidt with materialized projectors: subtract
/// (sum of P_j) applied to each frame column, then normalize. The
/// textbook construction, used only to cross-check the production path.
inline ComplexMatrix projector_gram_schmidt(const FlagCoordinates& c) {
  const std::size_t n = c.dim();
  const ComplexMatrix f = unipotent_frame(c);
  ComplexMatrix q(n, n);
  ComplexMatrix projector_sum(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    ComplexMatrix column(n, 1);
    for (std::size_t i = 0; i < n; ++i) column(i, 0) = f(i, k);
    const ComplexMatrix residual =
        column - matmul(projector_sum, column);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm_sq += std::norm(residual(i, 0));
    const double norm = std::sqrt(norm_sq);
    for (std::size_t i = 0; i < n; ++i) q(i, k) = residual(i, 0) / norm;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        projector_sum(i, j) += q(i, k) * std::conj(q(j, k));
  }
  return q;
}

/// Inverse of a unit lower-triangular matrix by forward substitution.
inline ComplexMatrix unipotent_inverse(const ComplexMatrix& l) {
  const std::size_t n = l.rows();
  ComplexMatrix inv = ComplexMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = col + 1; i < n; ++i) {
      Complex sum(0.0, 0.0);
      for (std::size_t k = col; k < i; ++k) sum += l(i, k) * inv(k, col);
      inv(i, col) = -sum;
    }
  }
  return inv;
}

/// Random hermitian matrix with entries of unit scale.
template <typename Rng>
ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = random_in_disc(rng, 1.0);
  const ComplexMatrix at = adjoint(a);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + at(i, j));
  return h;
}

template <typename Rng>
ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                            double radius = 1.0) {
  ComplexMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = random_in_disc(rng, radius);
  return a;
}

template <typename Rng>
ComplexMatrix random_unitary(Rng& rng, std::size_t n, double radius = 1.0) {
  return gram_schmidt_unitary(random_coordinates(rng, n, radius));
}

}  // namespace ckmflag::testing
