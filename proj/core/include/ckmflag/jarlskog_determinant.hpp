#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ckmflag/complex_matrix.hpp"
#include "ckmflag/flag.hpp"

namespace ckmflag {

/// Strictly increasing positive masses of one sector. The strict ordering
/// fixes the sign of the pairwise difference product.
class MassSpectrum {
 public:
  explicit MassSpectrum(std::vector<double> masses);

  std::size_t count() const noexcept { return masses_.size(); }
  std::span<const double> masses() const noexcept { return masses_; }

  /// Product of all pairwise differences m_j - m_i over i < j; positive.
  double difference_product() const;

  ComplexMatrix as_diagonal() const;

 private:
  std::vector<double> masses_;
};

/// U diag(s) U†, averaged with its own adjoint to remove rounding drift.
/// Validates that u is unitary within unitarity_tolerance and that shapes
/// match.
ComplexMatrix build_mass_matrix(const ComplexMatrix& u, const MassSpectrum& s,
                                double unitarity_tolerance = 1e-8);

/// determinant(commutator(m, m_prime)). For hermitian inputs the
/// commutator is anti-hermitian, so the value is real for even n and pure
/// imaginary for odd n.
Complex commutator_det(const ComplexMatrix& m, const ComplexMatrix& m_prime);

/// Closed form of the n = 2 commutator determinant:
///   (m2-m1)² (m2'-m1')² |V11|² |V21|².
double closed_form_det_n2(const MassSpectrum& s, const MassSpectrum& s_prime,
                          const ComplexMatrix& v);

/// Closed form of the n = 3 commutator determinant: the product of the six
/// pairwise mass differences times 2i Im(V11 V22 conj(V12) conj(V21)).
Complex closed_form_det_n3(const MassSpectrum& s, const MassSpectrum& s_prime,
                           const ComplexMatrix& v);

struct JarlskogIdentity {
  double from_determinant;  // Re(-i det[M,M'] / (2 T B))
  double from_plaquette;    // leading-plaquette invariant of V
};

/// End-to-end identity between the commutator-determinant route and the
/// plaquette route to the n = 3 CP invariant, both evaluated from the same
/// pair of coordinate sets and spectra. The imaginary residue of the
/// determinant route must be negligible or InvariantViolationError is
/// raised.
JarlskogIdentity jarlskog_identity_check(const FlagCoordinates& left,
                                         const FlagCoordinates& right,
                                         const MassSpectrum& s,
                                         const MassSpectrum& s_prime);

enum class DetParity { real, pure_imaginary };

/// Classifies commutator_det(m, m_prime) by its dominant component and
/// asserts the minor component is below 1e-9 relative (1e-12 absolute when
/// the value is essentially zero). Both components large raises
/// InvariantViolationError.
DetParity det_parity_check(const ComplexMatrix& m,
                           const ComplexMatrix& m_prime);

}  // namespace ckmflag
