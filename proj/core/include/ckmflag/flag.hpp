#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ckmflag/complex_matrix.hpp"

namespace ckmflag {

/// Local complex coordinates on the flag manifold U(n)/U(1)^n: one entry
/// per strictly-lower index pair (i, j), i > j (0-based), stored column by
/// column. For n = 3 the canonical order is (x, y, z) = ((1,0), (2,0),
/// (2,1)); for n = 4 it is (x1, x2, x3, y1, y2, z1) =
/// ((1,0), (2,0), (3,0), (2,1), (3,1), (3,2)).
class FlagCoordinates {
 public:
  /// Zero coordinates (the chart origin, whose unitary is the identity).
  explicit FlagCoordinates(std::size_t n);
  FlagCoordinates(std::size_t n, std::vector<Complex> coords);

  static FlagCoordinates for_n3(Complex x, Complex y, Complex z);
  static FlagCoordinates for_n4(Complex x1, Complex x2, Complex x3,
                                Complex y1, Complex y2, Complex z1);

  std::size_t dim() const noexcept { return n_; }
  std::size_t count() const noexcept { return coords_.size(); }

  /// Entry for pair (i, j), 0-based with i > j.
  const Complex& at(std::size_t i, std::size_t j) const;

  std::span<const Complex> values() const noexcept { return coords_; }

  static std::size_t flat_index(std::size_t n, std::size_t i, std::size_t j);

 private:
  std::size_t n_;
  std::vector<Complex> coords_;
};

double max_abs_difference(const FlagCoordinates& a, const FlagCoordinates& b);

/// The positive denominators produced by orthonormalizing the unipotent
/// frame; each is 1 plus a sum of squared moduli, so never below 1.
class NormalizationFactors {
 public:
  explicit NormalizationFactors(std::vector<double> deltas);
  std::span<const double> deltas() const noexcept { return deltas_; }
  std::size_t count() const noexcept { return deltas_.size(); }
  double product() const;

 private:
  std::vector<double> deltas_;
};

struct KahlerData {
  double potential;       // log of the product of the deltas, >= 0
  double volume_density;  // coefficient of the coordinate volume element
};

/// Unit lower-triangular n x n matrix carrying the coordinates in its
/// strictly lower part.
ComplexMatrix unipotent_frame(const FlagCoordinates& c);

struct OrthonormalizedFrame {
  ComplexMatrix unitary;
  /// Norm of each column after orthogonalization against the previous
  /// ones, taken just before normalization. column_norms[0]^2 equals the
  /// first delta factor.
  std::vector<double> column_norms;
};

/// Gram-Schmidt orthonormalization of the unipotent frame, column by
/// column against the already-built columns, with one re-orthogonalization
/// pass. Works for any n >= 2; the frame's unit diagonal guarantees
/// independent columns.
OrthonormalizedFrame orthonormalize_frame(const FlagCoordinates& c);

/// The unitary part of orthonormalize_frame.
ComplexMatrix gram_schmidt_unitary(const FlagCoordinates& c);

/// Explicit closed-form unitary for n = 3 coordinates (x, y, z): columns
///   (1, x, y)/sqrt(D1),
///   (-(x̄+ȳz), 1-(xz-y)ȳ, z+x̄(xz-y))/sqrt(D1 D2),
///   (x̄z̄-ȳ, -z̄, 1)/sqrt(D2)
/// with D1 = 1+|x|²+|y|², D2 = 1+|z|²+|xz-y|².
ComplexMatrix closed_form_unitary_n3(const FlagCoordinates& c);

/// Explicit closed-form unitary for n = 4 coordinates
/// (x1, x2, x3, y1, y2, z1). Agrees with gram_schmidt_unitary entrywise.
ComplexMatrix closed_form_unitary_n4(const FlagCoordinates& c);

/// Closed-form delta factors: (D1, D2) for n = 3 and (D1, D2, D3) for
/// n = 4. Other dimensions have no closed list and raise
/// NotImplementedError.
NormalizationFactors normalization_factors(const FlagCoordinates& c);

/// Kähler potential log(D1 D2) and volume density 2/(D1 D2)² at an n = 3
/// point. Restricted to n = 3.
KahlerData kahler_data(const FlagCoordinates& c);

/// Left inverse of the parametrization: the unique coordinates c with
/// w = gram_schmidt_unitary(c) · diag(phases). Computed as the strictly
/// lower part of the unit lower-triangular factor in w = L R, which is
/// invariant under right multiplication by any diagonal unitary.
///
/// Throws ValidationError when w fails the unitarity check and
/// GaugeSingularError when a leading principal minor of w vanishes (the
/// point lies outside this chart).
FlagCoordinates coords_from_unitary(const ComplexMatrix& w,
                                    double unitarity_tolerance = 1e-8,
                                    double pivot_tolerance = 1e-10);

}  // namespace ckmflag
