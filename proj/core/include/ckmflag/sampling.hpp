#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ckmflag/flag.hpp"

namespace ckmflag {

/// Uniform draw from the closed complex disc of the given radius.
template <typename Rng>
Complex random_in_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  return Complex(r * std::cos(phase), r * std::sin(phase));
}

/// Coordinates with every entry drawn independently from the disc.
template <typename Rng>
FlagCoordinates random_coordinates(Rng& rng, std::size_t n, double radius) {
  std::vector<Complex> coords(n * (n - 1) / 2);
  for (Complex& z : coords) z = random_in_disc(rng, radius);
  return FlagCoordinates(n, std::move(coords));
}

/// Masses drawn log-uniformly from [low, high], sorted; redrawn in the
/// vanishingly unlikely event of a tie.
template <typename Rng>
std::vector<double> random_log_uniform_masses(Rng& rng, std::size_t n,
                                              double low = 1e-2,
                                              double high = 1e2) {
  std::uniform_real_distribution<double> exponent(std::log(low),
                                                  std::log(high));
  std::vector<double> masses(n);
  while (true) {
    for (double& m : masses) m = std::exp(exponent(rng));
    std::sort(masses.begin(), masses.end());
    bool distinct = true;
    for (std::size_t i = 1; i < n; ++i)
      if (masses[i] <= masses[i - 1]) distinct = false;
    if (distinct) return masses;
  }
}

}  // namespace ckmflag
