#include "ckmflag/flag.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ckmflag {

namespace {

void require_dim(const FlagCoordinates& c, std::size_t n, const char* where) {
  if (c.dim() != n) {
    throw ValidationError(std::string(where) + " requires n = " +
                          std::to_string(n) + ", got n = " +
                          std::to_string(c.dim()));
  }
}

}  // namespace

FlagCoordinates::FlagCoordinates(std::size_t n)
    : n_(n), coords_(n >= 2 ? n * (n - 1) / 2 : 0, Complex(0.0, 0.0)) {
  if (n < 2) {
    throw ValidationError("flag coordinates need n >= 2, got n = " +
                          std::to_string(n));
  }
}

FlagCoordinates::FlagCoordinates(std::size_t n, std::vector<Complex> coords)
    : n_(n), coords_(std::move(coords)) {
  if (n < 2) {
    throw ValidationError("flag coordinates need n >= 2, got n = " +
                          std::to_string(n));
  }
  if (coords_.size() != n * (n - 1) / 2) {
    throw ValidationError("expected " + std::to_string(n * (n - 1) / 2) +
                          " coordinates for n = " + std::to_string(n) +
                          ", got " + std::to_string(coords_.size()));
  }
  for (const Complex& z : coords_) {
    if (!is_finite(z)) throw ValidationError("coordinates must be finite");
  }
}

FlagCoordinates FlagCoordinates::for_n3(Complex x, Complex y, Complex z) {
  return FlagCoordinates(3, {x, y, z});
}

FlagCoordinates FlagCoordinates::for_n4(Complex x1, Complex x2, Complex x3,
                                        Complex y1, Complex y2, Complex z1) {
  return FlagCoordinates(4, {x1, x2, x3, y1, y2, z1});
}

std::size_t FlagCoordinates::flat_index(std::size_t n, std::size_t i,
                                        std::size_t j) {
  // Column-major over the strictly lower triangle: column j holds rows
  // j+1 .. n-1.
  return j * (n - 1) - j * (j + 1) / 2 + j + (i - j - 1);
}

const Complex& FlagCoordinates::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= i) {
    throw ValidationError("coordinate index (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") is not strictly lower for n " +
                          std::to_string(n_));
  }
  return coords_[flat_index(n_, i, j)];
}

double max_abs_difference(const FlagCoordinates& a, const FlagCoordinates& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError("cannot compare coordinates of dimension " +
                     std::to_string(a.dim()) + " and " +
                     std::to_string(b.dim()));
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.count(); ++k)
    worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  return worst;
}

NormalizationFactors::NormalizationFactors(std::vector<double> deltas)
    : deltas_(std::move(deltas)) {
  for (double d : deltas_) {
    // Allow rounding slack just below the exact lower bound of 1.
    if (!std::isfinite(d) || d < 1.0 - 1e-9) {
      throw ValidationError("delta factors must be finite and >= 1");
    }
  }
}

double NormalizationFactors::product() const {
  double p = 1.0;
  for (double d : deltas_) p *= d;
  return p;
}

ComplexMatrix unipotent_frame(const FlagCoordinates& c) {
  const std::size_t n = c.dim();
  ComplexMatrix f = ComplexMatrix::identity(n);
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) f(i, j) = c.at(i, j);
  return f;
}

OrthonormalizedFrame orthonormalize_frame(const FlagCoordinates& c) {
  const std::size_t n = c.dim();
  const ComplexMatrix f = unipotent_frame(c);
  ComplexMatrix q(n, n);
  std::vector<double> norms(n, 0.0);
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) v[i] = f(i, k);
    // Two modified passes keep orthogonality near machine precision even
    // for ill-conditioned frames.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        Complex overlap(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) overlap += std::conj(q(i, j)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= overlap * q(i, j);
      }
    }
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm_sq += std::norm(v[i]);
    const double norm = std::sqrt(norm_sq);
    norms[k] = norm;
    for (std::size_t i = 0; i < n; ++i) q(i, k) = v[i] / norm;
  }
  return {std::move(q), std::move(norms)};
}

ComplexMatrix gram_schmidt_unitary(const FlagCoordinates& c) {
  return orthonormalize_frame(c).unitary;
}

ComplexMatrix closed_form_unitary_n3(const FlagCoordinates& c) {
  require_dim(c, 3, "closed_form_unitary_n3");
  const Complex x = c.at(1, 0);
  const Complex y = c.at(2, 0);
  const Complex z = c.at(2, 1);
  const Complex s = x * z - y;
  const double d1 = 1.0 + std::norm(x) + std::norm(y);
  const double d2 = 1.0 + std::norm(z) + std::norm(s);
  const double n1 = std::sqrt(d1);
  const double n12 = std::sqrt(d1 * d2);
  const double n2 = std::sqrt(d2);

  ComplexMatrix u(3, 3);
  u(0, 0) = 1.0 / n1;
  u(1, 0) = x / n1;
  u(2, 0) = y / n1;

  u(0, 1) = -(std::conj(x) + std::conj(y) * z) / n12;
  u(1, 1) = (1.0 - s * std::conj(y)) / n12;
  u(2, 1) = (z + std::conj(x) * s) / n12;

  u(0, 2) = (std::conj(x) * std::conj(z) - std::conj(y)) / n2;
  u(1, 2) = -std::conj(z) / n2;
  u(2, 2) = 1.0 / n2;
  return u;
}

ComplexMatrix closed_form_unitary_n4(const FlagCoordinates& c) {
  require_dim(c, 4, "closed_form_unitary_n4");
  const Complex x1 = c.at(1, 0), x2 = c.at(2, 0), x3 = c.at(3, 0);
  const Complex y1 = c.at(2, 1), y2 = c.at(3, 1);
  const Complex z1 = c.at(3, 2);

  const Complex t = std::conj(x1) + std::conj(x2) * y1 + std::conj(x3) * y2;
  const double d1 = 1.0 + std::norm(x1) + std::norm(x2) + std::norm(x3);
  const double d2 = 1.0 + std::norm(y1) + std::norm(y2) +
                    std::norm(x2 - x1 * y1) + std::norm(x3 - x1 * y2) +
                    std::norm(x2 * y2 - x3 * y1);
  const Complex r = y2 - y1 * z1;
  const double d3 =
      1.0 + std::norm(z1) + std::norm(r) + std::norm(x1 * r - (x3 - x2 * z1));

  // Second column before normalization.
  const Complex p2[4] = {-t, d1 - x1 * t, y1 * d1 - x2 * t, y2 * d1 - x3 * t};

  // Third column before normalization.
  const Complex cross = std::conj(x2) + z1 * std::conj(x3);
  const Complex brace =
      (std::conj(y1) * d1 - std::conj(x2) * std::conj(t)) +
      z1 * (std::conj(y2) * d1 - std::conj(x3) * std::conj(t));
  const Complex a[4] = {
      -cross * d2 + brace * t,
      -cross * x1 * d2 - brace * (d1 - x1 * t),
      d1 * d2 - cross * x2 * d2 - brace * (y1 * d1 - x2 * t),
      z1 * d1 * d2 - cross * x3 * d2 - brace * (y2 * d1 - x3 * t),
  };

  // Fourth column before normalization.
  const Complex b[4] = {
      -std::conj(x3) + std::conj(x1) * std::conj(y2) +
          std::conj(x2) * std::conj(z1) -
          std::conj(x1) * std::conj(y1) * std::conj(z1),
      -std::conj(y2) + std::conj(y1) * std::conj(z1),
      -std::conj(z1),
      Complex(1.0, 0.0),
  };

  const double n1 = std::sqrt(d1);
  const double n12 = std::sqrt(d1 * d2);
  const double n23 = d1 * std::sqrt(d2 * d3);
  const double n3 = std::sqrt(d3);

  ComplexMatrix u(4, 4);
  const Complex p1[4] = {Complex(1.0, 0.0), x1, x2, x3};
  for (std::size_t i = 0; i < 4; ++i) {
    u(i, 0) = p1[i] / n1;
    u(i, 1) = p2[i] / n12;
    u(i, 2) = a[i] / n23;
    u(i, 3) = b[i] / n3;
  }
  return u;
}

NormalizationFactors normalization_factors(const FlagCoordinates& c) {
  if (c.dim() == 3) {
    const Complex x = c.at(1, 0), y = c.at(2, 0), z = c.at(2, 1);
    const double d1 = 1.0 + std::norm(x) + std::norm(y);
    const double d2 = 1.0 + std::norm(z) + std::norm(x * z - y);
    return NormalizationFactors({d1, d2});
  }
  if (c.dim() == 4) {
    const Complex x1 = c.at(1, 0), x2 = c.at(2, 0), x3 = c.at(3, 0);
    const Complex y1 = c.at(2, 1), y2 = c.at(3, 1);
    const Complex z1 = c.at(3, 2);
    const double d1 = 1.0 + std::norm(x1) + std::norm(x2) + std::norm(x3);
    const double d2 = 1.0 + std::norm(y1) + std::norm(y2) +
                      std::norm(x2 - x1 * y1) + std::norm(x3 - x1 * y2) +
                      std::norm(x2 * y2 - x3 * y1);
    const Complex r = y2 - y1 * z1;
    const double d3 = 1.0 + std::norm(z1) + std::norm(r) +
                      std::norm(x1 * r - (x3 - x2 * z1));
    return NormalizationFactors({d1, d2, d3});
  }
  throw NotImplementedError(
      "closed-form delta factors exist only for n = 3 and n = 4, got n = " +
      std::to_string(c.dim()));
}

KahlerData kahler_data(const FlagCoordinates& c) {
  if (c.dim() != 3) {
    throw NotImplementedError("kahler_data is defined for n = 3 only, got n = " +
                              std::to_string(c.dim()));
  }
  const double p = normalization_factors(c).product();
  return {std::log(p), 2.0 / (p * p)};
}

FlagCoordinates coords_from_unitary(const ComplexMatrix& w,
                                    double unitarity_tolerance,
                                    double pivot_tolerance) {
  if (!w.is_square() || w.rows() < 2) {
    throw ValidationError("coords_from_unitary needs a square matrix with n >= 2");
  }
  const double defect = unitarity_defect(w);
  if (!(defect < unitarity_tolerance)) {
    throw ValidationError("input is not unitary: ||W†W - I||_F = " +
                          std::to_string(defect));
  }
  const std::size_t n = w.rows();
  LuFactors lu;
  try {
    lu = lu_unpivoted(w, pivot_tolerance);
  } catch (const SingularPivotError& e) {
    throw GaugeSingularError(
        "unitary lies outside the coordinate chart: leading principal minor "
        "of order " +
        std::to_string(e.minor_index()) + " vanishes");
  }
  std::vector<Complex> coords;
  coords.reserve(n * (n - 1) / 2);
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) coords.push_back(lu.lower(i, j));
  return FlagCoordinates(n, std::move(coords));
}

}  // namespace ckmflag
