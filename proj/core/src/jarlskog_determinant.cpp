#include "ckmflag/jarlskog_determinant.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ckmflag/ckm.hpp"

namespace ckmflag {

namespace {

// Extended-precision kernel for the determinant route. The commutator of
// two mass matrices sits close to cancellation and its determinant is
// divided by products of mass differences, so every step from the stored
// inputs onward runs in long double.
namespace xprec {

using Scalar = std::complex<long double>;
using Mat = std::vector<Scalar>;  // n x n row-major

Mat promote(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  Mat m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i * n + j] = Scalar(a(i, j).real(), a(i, j).imag());
  return m;
}

Mat mul(const Mat& a, const Mat& b, std::size_t n) {
  Mat r(n * n, Scalar(0.0L, 0.0L));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Scalar aik = a[i * n + k];
      for (std::size_t j = 0; j < n; ++j) r[i * n + j] += aik * b[k * n + j];
    }
  return r;
}

Mat sub(const Mat& a, const Mat& b, std::size_t n) {
  Mat r(n * n);
  for (std::size_t k = 0; k < n * n; ++k) r[k] = a[k] - b[k];
  return r;
}

Mat adjoint_of(const Mat& a, std::size_t n) {
  Mat r(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[j * n + i] = std::conj(a[i * n + j]);
  return r;
}

Scalar det(Mat u, std::size_t n) {
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
    if (pivot_mag == 0.0L) return Scalar(0.0L, 0.0L);
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(u[k * n + j], u[pivot_row * n + j]);
      sign = -sign;
    }
    const Scalar pivot = u[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Scalar factor = u[i * n + k] / pivot;
      u[i * n + k] = 0.0L;
      for (std::size_t j = k + 1; j < n; ++j)
        u[i * n + j] -= factor * u[k * n + j];
    }
  }
  Scalar result(sign, 0.0L);
  for (std::size_t k = 0; k < n; ++k) result *= u[k * n + k];
  return result;
}

// U diag(masses) U† with hermitization, entirely in long double.
Mat mass_matrix(const Mat& u, std::span<const double> masses, std::size_t n) {
  Mat scaled = u;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scaled[i * n + j] *= static_cast<long double>(masses[j]);
  Mat m = mul(scaled, adjoint_of(u, n), n);
  Mat h(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h[i * n + j] = 0.5L * (m[i * n + j] + std::conj(m[j * n + i]));
  return h;
}

Scalar commutator_det(const Mat& a, const Mat& b, std::size_t n) {
  return det(sub(mul(a, b, n), mul(b, a, n), n), n);
}

}  // namespace xprec

}  // namespace

MassSpectrum::MassSpectrum(std::vector<double> masses)
    : masses_(std::move(masses)) {
  if (masses_.empty()) {
    throw ValidationError("mass spectrum must not be empty");
  }
  double prev = 0.0;
  for (double m : masses_) {
    if (!std::isfinite(m) || m <= 0.0) {
      throw ValidationError("masses must be finite and positive");
    }
    if (m <= prev) {
      throw ValidationError("masses must be strictly increasing");
    }
    prev = m;
  }
}

double MassSpectrum::difference_product() const {
  double p = 1.0;
  for (std::size_t j = 1; j < masses_.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) p *= masses_[j] - masses_[i];
  return p;
}

ComplexMatrix MassSpectrum::as_diagonal() const {
  std::vector<Complex> d(masses_.begin(), masses_.end());
  return ComplexMatrix::diagonal(d);
}

ComplexMatrix build_mass_matrix(const ComplexMatrix& u, const MassSpectrum& s,
                                double unitarity_tolerance) {
  if (!u.is_square() || u.rows() != s.count()) {
    throw ShapeError("mass matrix needs a square unitary matching the " +
                     std::to_string(s.count()) + " masses");
  }
  const double defect = unitarity_defect(u);
  if (!(defect < unitarity_tolerance)) {
    throw ValidationError("build_mass_matrix: input is not unitary, ||U†U - I||_F = " +
                          std::to_string(defect));
  }
  const ComplexMatrix m = matmul(matmul(u, s.as_diagonal()), adjoint(u));
  // Hermitize to kill rounding drift.
  const ComplexMatrix mt = adjoint(m);
  ComplexMatrix h(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      h(i, j) = 0.5 * (m(i, j) + mt(i, j));
  return h;
}

Complex commutator_det(const ComplexMatrix& m, const ComplexMatrix& m_prime) {
  if (!m.is_square() || !m_prime.is_square() || m.rows() != m_prime.rows()) {
    throw ShapeError("commutator_det requires square matrices of equal size");
  }
  const std::size_t n = m.rows();
  const xprec::Scalar det =
      xprec::commutator_det(xprec::promote(m), xprec::promote(m_prime), n);
  return Complex(static_cast<double>(det.real()),
                 static_cast<double>(det.imag()));
}

double closed_form_det_n2(const MassSpectrum& s, const MassSpectrum& s_prime,
                          const ComplexMatrix& v) {
  if (s.count() != 2 || s_prime.count() != 2 || v.rows() != 2 ||
      v.cols() != 2) {
    throw ValidationError("closed_form_det_n2 requires n = 2 inputs");
  }
  const double dm = s.masses()[1] - s.masses()[0];
  const double dmp = s_prime.masses()[1] - s_prime.masses()[0];
  return dm * dm * dmp * dmp * std::norm(v(0, 0)) * std::norm(v(1, 0));
}

Complex closed_form_det_n3(const MassSpectrum& s, const MassSpectrum& s_prime,
                           const ComplexMatrix& v) {
  if (s.count() != 3 || s_prime.count() != 3 || v.rows() != 3 ||
      v.cols() != 3) {
    throw ValidationError("closed_form_det_n3 requires n = 3 inputs");
  }
  const double t = s.difference_product();
  const double b = s_prime.difference_product();
  const double plaquette = std::imag(v(0, 0) * v(1, 1) * std::conj(v(0, 1)) *
                                     std::conj(v(1, 0)));
  return Complex(0.0, 2.0 * t * b * plaquette);
}

JarlskogIdentity jarlskog_identity_check(const FlagCoordinates& left,
                                         const FlagCoordinates& right,
                                         const MassSpectrum& s,
                                         const MassSpectrum& s_prime) {
  if (left.dim() != 3 || right.dim() != 3 || s.count() != 3 ||
      s_prime.count() != 3) {
    throw ValidationError("jarlskog_identity_check requires n = 3 inputs");
  }
  // The ratio det/(2 T B) is invariant under rescaling either spectrum,
  // so work with each spectrum normalized to its top mass. That keeps the
  // commutator at unit scale for any mass hierarchy.
  auto normalized = [](const MassSpectrum& spectrum) {
    std::vector<double> scaled(spectrum.masses().begin(),
                               spectrum.masses().end());
    const double top = scaled.back();
    for (double& m : scaled) m /= top;
    return MassSpectrum(std::move(scaled));
  };
  const MassSpectrum sn = normalized(s);
  const MassSpectrum sn_prime = normalized(s_prime);

  const ComplexMatrix u = gram_schmidt_unitary(left);
  const ComplexMatrix u_prime = gram_schmidt_unitary(right);

  const double t = sn.difference_product();
  const double b = sn_prime.difference_product();
  const double denom = 2.0 * t * b;
  if (denom == 0.0 || !std::isnormal(denom)) {
    throw NumericError("mass spectra too degenerate: |2 T B| underflows");
  }

  const std::size_t n = 3;
  const xprec::Mat m = xprec::mass_matrix(xprec::promote(u), sn.masses(), n);
  const xprec::Mat m_prime =
      xprec::mass_matrix(xprec::promote(u_prime), sn_prime.masses(), n);
  const xprec::Scalar det = xprec::commutator_det(m, m_prime, n);
  const xprec::Scalar j_extended =
      xprec::Scalar(0.0L, -1.0L) * det / static_cast<long double>(denom);
  const double j_det = static_cast<double>(j_extended.real());
  const double residue = static_cast<double>(std::abs(j_extended.imag()));
  if (residue > 1e-9 * std::max(std::abs(j_det), 1e-2)) {
    throw InvariantViolationError(
        "determinant route produced a non-real invariant: residue " +
        std::to_string(residue));
  }

  const ComplexMatrix v = matmul(adjoint(u), u_prime);
  const double j_plaquette = jarlskog_invariant(v, Plaquette::leading());
  return {j_det, j_plaquette};
}

DetParity det_parity_check(const ComplexMatrix& m,
                           const ComplexMatrix& m_prime) {
  // Positive rescaling cannot change which component dominates, so bring
  // both inputs to unit Frobenius norm; the fixed thresholds below then
  // apply at any mass scale.
  auto normalized = [](const ComplexMatrix& a) {
    const double norm = frobenius_norm(a);
    if (norm == 0.0) return a;
    ComplexMatrix scaled(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) scaled(i, j) = a(i, j) / norm;
    return scaled;
  };
  const Complex det = commutator_det(normalized(m), normalized(m_prime));
  const double re = std::abs(det.real());
  const double im = std::abs(det.imag());
  const double magnitude = std::hypot(re, im);
  const double minor = std::min(re, im);
  if (minor >= 1e-9 * magnitude && minor >= 1e-12) {
    throw InvariantViolationError(
        "commutator determinant is neither real nor pure imaginary: " +
        std::to_string(det.real()) + " + " + std::to_string(det.imag()) + "i");
  }
  return im >= re ? DetParity::pure_imaginary : DetParity::real;
}

}  // namespace ckmflag
