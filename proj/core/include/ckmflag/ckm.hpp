#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ckmflag/complex_matrix.hpp"
#include "ckmflag/flag.hpp"

namespace ckmflag {

/// A choice of two rows (a, b) and two columns (c, d), 0-based with
/// row_a < row_b and col_a < col_b. The four selected entries form the
/// quartic product V(ra,ca) V(rb,cb) conj(V(ra,cb)) conj(V(rb,ca)).
struct Plaquette {
  std::size_t row_a;
  std::size_t row_b;
  std::size_t col_a;
  std::size_t col_b;

  Plaquette(std::size_t ra, std::size_t rb, std::size_t ca, std::size_t cb);

  /// Rows {1,3} x columns {1,3} in 1-based terms: the four corner entries
  /// of a 3x3 matrix. The library's default choice.
  static Plaquette corners();
  /// Rows {1,2} x columns {1,2}: the leading 2x2 block, the conventional
  /// choice elsewhere.
  static Plaquette leading();
};

/// Mixing matrix assembled from two coordinate sets together with its
/// pre-normalization entry matrix f and the per-sector delta factors:
/// v = diag(left scales)^-1 · f · diag(right scales)^-1.
struct CkmResult {
  ComplexMatrix v;
  ComplexMatrix f;
  NormalizationFactors left_deltas;
  NormalizationFactors right_deltas;
};

/// v = adjoint(U(left)) · U(right) with U the orthonormalized frame. For
/// n = 3 and n = 4, f and the deltas come from the closed forms; for other
/// n, f is recovered by rescaling v with the generic Gram-determinant
/// factors and the deltas are those Gram determinants.
CkmResult build_ckm(const FlagCoordinates& left, const FlagCoordinates& right);

/// The nine n = 3 entry polynomials f_ij in the coordinates
/// (x, y, z) of the left sector and (u, v, w) of the right sector.
ComplexMatrix closed_form_f_n3(const FlagCoordinates& left,
                               const FlagCoordinates& right);

/// The n = 4 entry matrix, computed as the product of the adjoint of the
/// left pre-normalization column matrix with the right one.
ComplexMatrix closed_form_f_n4(const FlagCoordinates& left,
                               const FlagCoordinates& right);

/// Im of the plaquette product. For a unitary 3x3 matrix this is the CP
/// invariant up to the checkerboard sign (see plaquette_sign); for larger
/// matrices it is a rephasing invariant of the chosen plaquette but the 36
/// values at n = 4 are not multiples of one number (see
/// all_plaquette_values).
double jarlskog_invariant(const ComplexMatrix& v, const Plaquette& p);

/// The n = 3 invariant evaluated directly from the closed-form rational
/// expression in the coordinates, without building the matrix. Uses the
/// corners plaquette.
double jarlskog_from_coords(const FlagCoordinates& left,
                            const FlagCoordinates& right);

/// diag(e^{i left}) · v · diag(e^{i right}).
ComplexMatrix rephase(const ComplexMatrix& v, std::span<const double> left_phases,
                      std::span<const double> right_phases);

/// Sign relating a 3x3 plaquette value to the corners value: the values
/// observed over random unitaries satisfy
///   jarlskog_invariant(v, p) = plaquette_sign(p) * jarlskog_invariant(v, corners).
/// The pattern is the product of a row-pair parity and a column-pair
/// parity, each -1 exactly for the pair {1,3} (0-based {0,2}).
int plaquette_sign(const Plaquette& p);

struct PlaquetteValue {
  Plaquette plaquette;
  double value;
};

/// Every plaquette value of v, row pairs and column pairs in
/// lexicographic order. single_invariant is true only for n = 3, where
/// all absolute values coincide.
struct PlaquetteScan {
  std::vector<PlaquetteValue> values;
  bool single_invariant;
};

PlaquetteScan all_plaquette_values(const ComplexMatrix& v);

}  // namespace ckmflag
