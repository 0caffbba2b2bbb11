#include "ckmflag/pdg.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ckmflag {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kCosineFloor = 1e-9;

void validate_angles(const PdgAngles& a) {
  for (double theta : {a.theta12, a.theta13, a.theta23}) {
    if (!std::isfinite(theta) || std::abs(theta) >= kHalfPi ||
        std::cos(theta) <= kCosineFloor) {
      throw ValidationError(
          "rotation angles must lie in (-pi/2, pi/2) with cosines above " +
          std::to_string(kCosineFloor));
    }
  }
  for (double phase : {a.delta, a.alpha, a.beta}) {
    if (!std::isfinite(phase)) throw ValidationError("phases must be finite");
  }
}

}  // namespace

ComplexMatrix pdg_unitary(const PdgAngles& a) {
  validate_angles(a);
  const double c12 = std::cos(a.theta12), s12 = std::sin(a.theta12);
  const double c13 = std::cos(a.theta13), s13 = std::sin(a.theta13);
  const double c23 = std::cos(a.theta23), s23 = std::sin(a.theta23);
  const Complex eip = std::polar(1.0, a.delta);
  const Complex eim = std::polar(1.0, -a.delta);

  ComplexMatrix u(3, 3);
  u(0, 0) = c12 * c13;
  u(0, 1) = s12 * c13;
  u(0, 2) = s13 * eim;
  u(1, 0) = -s12 * c23 - c12 * s23 * s13 * eip;
  u(1, 1) = c12 * c23 - s12 * s23 * s13 * eip;
  u(1, 2) = s23 * c13;
  u(2, 0) = s12 * s23 - c12 * c23 * s13 * eip;
  u(2, 1) = -c12 * s23 - s12 * c23 * s13 * eip;
  u(2, 2) = c23 * c13;

  const Complex left[3] = {std::polar(1.0, a.alpha + a.beta),
                           std::polar(1.0, a.alpha - a.beta),
                           std::polar(1.0, -2.0 * a.alpha)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) u(i, j) *= left[i];
  return u;
}

FlagCoordinates pdg_to_coords(const PdgAngles& a) {
  validate_angles(a);
  const double c13 = std::cos(a.theta13);
  const double c23 = std::cos(a.theta23), s23 = std::sin(a.theta23);
  const double t12 = std::tan(a.theta12);
  const double t13 = std::tan(a.theta13);
  const double t23 = std::tan(a.theta23);
  const Complex eip = std::polar(1.0, a.delta);

  const Complex x = -(t12 * c23 / c13 + s23 * t13 * eip);
  const Complex y = t12 * s23 / c13 - c23 * t13 * eip;
  const Complex z = -t23;
  return FlagCoordinates::for_n3(x, y, z);
}

PdgAngles coords_to_pdg(const FlagCoordinates& c, double tolerance) {
  if (c.dim() != 3) {
    throw ValidationError("coords_to_pdg requires n = 3 coordinates");
  }
  const Complex x = c.at(1, 0);
  const Complex y = c.at(2, 0);
  const Complex z = c.at(2, 1);
  if (std::abs(z.imag()) > tolerance) {
    throw NotRepresentableError(
        "z must be real for an angle decomposition (Im z = " +
        std::to_string(z.imag()) + "); rephase the unitary first");
  }

  PdgAngles a;
  a.theta23 = -std::atan(z.real());
  const double c23 = std::cos(a.theta23), s23 = std::sin(a.theta23);

  // Split the (x, y) relations into the real combination t12/c13 and the
  // complex combination t13 e^{i delta}.
  const Complex combo12 = -x * c23 + y * s23;  // t12 / c13
  const Complex combo13 = -x * s23 - y * c23;  // t13 e^{i delta}

  const double t13 = std::abs(combo13);
  a.delta = (t13 == 0.0) ? 0.0 : std::atan2(combo13.imag(), combo13.real());
  a.theta13 = std::atan(t13);
  a.theta12 = std::atan(combo12.real() * std::cos(a.theta13));

  // A complex residue in combo12 means the point is outside the image of
  // the angle map; verify by reconstruction.
  const FlagCoordinates rebuilt = pdg_to_coords(a);
  if (max_abs_difference(rebuilt, c) > 1e-9 * std::max(1.0, std::abs(combo12))) {
    throw NotRepresentableError(
        "coordinates are not in the image of the angle parametrization");
  }
  return a;
}

}  // namespace ckmflag
