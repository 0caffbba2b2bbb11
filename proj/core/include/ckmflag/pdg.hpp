#pragma once

#include "ckmflag/complex_matrix.hpp"
#include "ckmflag/flag.hpp"

namespace ckmflag {

/// Standard angle-and-phase parametrization of a 3x3 unitary: three
/// rotation angles in (-pi/2, pi/2) with cosines bounded away from zero,
/// one CP phase, and two optional left diagonal phases.
struct PdgAngles {
  double theta12 = 0.0;
  double theta13 = 0.0;
  double theta23 = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// diag(e^{i(alpha+beta)}, e^{i(alpha-beta)}, e^{-2i alpha}) times the
/// standard three-angle matrix with phase delta.
ComplexMatrix pdg_unitary(const PdgAngles& a);

/// The coordinate image of the standard parametrization:
///   x = -(t12 c23/c13 + s23 t13 e^{i delta})
///   y =   t12 s23/c13 - c23 t13 e^{i delta}
///   z = -t23
/// Independent of alpha and beta, which are left phases outside the
/// right-phase quotient.
FlagCoordinates pdg_to_coords(const PdgAngles& a);

/// Inverse of pdg_to_coords under the branch conventions theta in
/// (-pi/2, pi/2), theta13 >= 0, delta in (-pi, pi]. Coordinates with a
/// complex z (or otherwise outside the image of the map) raise
/// NotRepresentableError; alpha and beta come back as zero.
PdgAngles coords_to_pdg(const FlagCoordinates& c, double tolerance = 1e-9);

}  // namespace ckmflag
