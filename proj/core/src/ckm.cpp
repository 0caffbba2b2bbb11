#include "ckmflag/ckm.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace ckmflag {

namespace {

void require_same_dim(const FlagCoordinates& left, const FlagCoordinates& right,
                      const char* where) {
  if (left.dim() != right.dim()) {
    throw ShapeError(std::string(where) + ": dimension mismatch, n = " +
                     std::to_string(left.dim()) + " vs n = " +
                     std::to_string(right.dim()));
  }
}

// Pre-normalization column matrix for n = 4: the closed-form columns with
// their denominators cleared.
ComplexMatrix prenormalized_columns_n4(const FlagCoordinates& c) {
  const Complex x1 = c.at(1, 0), x2 = c.at(2, 0), x3 = c.at(3, 0);
  const Complex y1 = c.at(2, 1), y2 = c.at(3, 1);
  const Complex z1 = c.at(3, 2);

  const Complex t = std::conj(x1) + std::conj(x2) * y1 + std::conj(x3) * y2;
  const double d1 = 1.0 + std::norm(x1) + std::norm(x2) + std::norm(x3);
  const double d2 = 1.0 + std::norm(y1) + std::norm(y2) +
                    std::norm(x2 - x1 * y1) + std::norm(x3 - x1 * y2) +
                    std::norm(x2 * y2 - x3 * y1);

  const Complex cross = std::conj(x2) + z1 * std::conj(x3);
  const Complex brace =
      (std::conj(y1) * d1 - std::conj(x2) * std::conj(t)) +
      z1 * (std::conj(y2) * d1 - std::conj(x3) * std::conj(t));

  ComplexMatrix p(4, 4);
  p(0, 0) = 1.0;
  p(1, 0) = x1;
  p(2, 0) = x2;
  p(3, 0) = x3;

  p(0, 1) = -t;
  p(1, 1) = d1 - x1 * t;
  p(2, 1) = y1 * d1 - x2 * t;
  p(3, 1) = y2 * d1 - x3 * t;

  p(0, 2) = -cross * d2 + brace * t;
  p(1, 2) = -cross * x1 * d2 - brace * (d1 - x1 * t);
  p(2, 2) = d1 * d2 - cross * x2 * d2 - brace * (y1 * d1 - x2 * t);
  p(3, 2) = z1 * d1 * d2 - cross * x3 * d2 - brace * (y2 * d1 - x3 * t);

  p(0, 3) = -std::conj(x3) + std::conj(x1) * std::conj(y2) +
            std::conj(x2) * std::conj(z1) -
            std::conj(x1) * std::conj(y1) * std::conj(z1);
  p(1, 3) = -std::conj(y2) + std::conj(y1) * std::conj(z1);
  p(2, 3) = -std::conj(z1);
  p(3, 3) = 1.0;
  return p;
}

}  // namespace

Plaquette::Plaquette(std::size_t ra, std::size_t rb, std::size_t ca,
                     std::size_t cb)
    : row_a(ra), row_b(rb), col_a(ca), col_b(cb) {
  if (!(row_a < row_b) || !(col_a < col_b)) {
    throw ValidationError("plaquette indices must be strictly ordered");
  }
}

Plaquette Plaquette::corners() { return Plaquette(0, 2, 0, 2); }
Plaquette Plaquette::leading() { return Plaquette(0, 1, 0, 1); }

CkmResult build_ckm(const FlagCoordinates& left, const FlagCoordinates& right) {
  require_same_dim(left, right, "build_ckm");
  const std::size_t n = left.dim();
  const OrthonormalizedFrame lf = orthonormalize_frame(left);
  const OrthonormalizedFrame rf = orthonormalize_frame(right);
  ComplexMatrix v = matmul(adjoint(lf.unitary), rf.unitary);

  if (n == 3) {
    return CkmResult{std::move(v), closed_form_f_n3(left, right),
                     normalization_factors(left), normalization_factors(right)};
  }
  if (n == 4) {
    return CkmResult{std::move(v), closed_form_f_n4(left, right),
                     normalization_factors(left), normalization_factors(right)};
  }

  // Generic dimension: the delta role is played by the Gram determinants
  // G_k of the first k frame columns, and the column scales are
  // sqrt(G_k G_{k-1}).
  auto gram_chain = [](const OrthonormalizedFrame& frame) {
    const std::size_t m = frame.column_norms.size();
    std::vector<double> grams(m, 1.0);
    double running = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      running *= frame.column_norms[k] * frame.column_norms[k];
      grams[k] = running;
    }
    return grams;
  };
  const std::vector<double> gl = gram_chain(lf);
  const std::vector<double> gr = gram_chain(rf);
  auto scales = [](const std::vector<double>& grams) {
    std::vector<double> d(grams.size());
    double prev = 1.0;
    for (std::size_t k = 0; k < grams.size(); ++k) {
      d[k] = std::sqrt(grams[k] * prev);
      prev = grams[k];
    }
    return d;
  };
  const std::vector<double> dl = scales(gl);
  const std::vector<double> dr = scales(gr);
  ComplexMatrix f(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f(i, j) = v(i, j) * dl[i] * dr[j];
  return CkmResult{std::move(v), std::move(f),
                   NormalizationFactors(std::vector<double>(gl.begin(),
                                                            gl.end() - 1)),
                   NormalizationFactors(std::vector<double>(gr.begin(),
                                                            gr.end() - 1))};
}

ComplexMatrix closed_form_f_n3(const FlagCoordinates& left,
                               const FlagCoordinates& right) {
  require_same_dim(left, right, "closed_form_f_n3");
  if (left.dim() != 3) {
    throw ValidationError("closed_form_f_n3 requires n = 3");
  }
  const Complex x = left.at(1, 0), y = left.at(2, 0), z = left.at(2, 1);
  const Complex u = right.at(1, 0), v = right.at(2, 0), w = right.at(2, 1);
  const Complex xb = std::conj(x), yb = std::conj(y), zb = std::conj(z);
  const Complex ub = std::conj(u), vb = std::conj(v), wb = std::conj(w);

  // Recurring second-column pieces of each sector.
  const Complex l2a = x + y * zb;
  const Complex l2b = 1.0 - (xb * zb - yb) * y;
  const Complex l2c = zb + x * (xb * zb - yb);
  const Complex r2a = ub + vb * w;
  const Complex r2b = 1.0 - (u * w - v) * vb;
  const Complex r2c = w + ub * (u * w - v);

  ComplexMatrix f(3, 3);
  f(0, 0) = 1.0 + xb * u + yb * v;
  f(0, 1) = -r2a + xb * r2b + yb * r2c;
  f(0, 2) = (ub * wb - vb) - xb * wb + yb;

  f(1, 0) = -l2a + l2b * u + l2c * v;
  f(1, 1) = l2a * r2a + l2b * r2b + l2c * r2c;
  f(1, 2) = -l2a * (ub * wb - vb) - l2b * wb + l2c;

  f(2, 0) = (x * z - y) - z * u + v;
  f(2, 1) = -(x * z - y) * r2a - z * r2b + r2c;
  f(2, 2) = (x * z - y) * (ub * wb - vb) + z * wb + 1.0;
  return f;
}

ComplexMatrix closed_form_f_n4(const FlagCoordinates& left,
                               const FlagCoordinates& right) {
  require_same_dim(left, right, "closed_form_f_n4");
  if (left.dim() != 4) {
    throw ValidationError("closed_form_f_n4 requires n = 4");
  }
  return matmul(adjoint(prenormalized_columns_n4(left)),
                prenormalized_columns_n4(right));
}

double jarlskog_invariant(const ComplexMatrix& v, const Plaquette& p) {
  if (!v.is_square()) {
    throw ShapeError("jarlskog_invariant requires a square matrix");
  }
  if (p.row_b >= v.rows() || p.col_b >= v.cols()) {
    throw ValidationError("plaquette indices out of range for n = " +
                          std::to_string(v.rows()));
  }
  return std::imag(v(p.row_a, p.col_a) * v(p.row_b, p.col_b) *
                   std::conj(v(p.row_a, p.col_b)) *
                   std::conj(v(p.row_b, p.col_a)));
}

double jarlskog_from_coords(const FlagCoordinates& left,
                            const FlagCoordinates& right) {
  require_same_dim(left, right, "jarlskog_from_coords");
  if (left.dim() != 3) {
    throw ValidationError("jarlskog_from_coords requires n = 3");
  }
  const Complex x = left.at(1, 0), y = left.at(2, 0), z = left.at(2, 1);
  const Complex u = right.at(1, 0), v = right.at(2, 0), w = right.at(2, 1);
  const Complex xb = std::conj(x), yb = std::conj(y), zb = std::conj(z);
  const Complex ub = std::conj(u), vb = std::conj(v), wb = std::conj(w);

  const double dl1 = 1.0 + std::norm(x) + std::norm(y);
  const double dl2 = 1.0 + std::norm(z) + std::norm(x * z - y);
  const double dr1 = 1.0 + std::norm(u) + std::norm(v);
  const double dr2 = 1.0 + std::norm(w) + std::norm(u * w - v);

  const Complex numerator = (1.0 + xb * u + yb * v) *
                            (1.0 + z * wb + (x * z - y) * (ub * wb - vb)) *
                            (xb * zb - yb - zb * ub + vb) *
                            (u * w - v - x * w + y);
  return std::imag(numerator) / (dl1 * dl2 * dr1 * dr2);
}

ComplexMatrix rephase(const ComplexMatrix& v, std::span<const double> left_phases,
                      std::span<const double> right_phases) {
  if (left_phases.size() != v.rows() || right_phases.size() != v.cols()) {
    throw ShapeError("phase counts must match the matrix dimensions");
  }
  ComplexMatrix r(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const Complex li = std::polar(1.0, left_phases[i]);
    for (std::size_t j = 0; j < v.cols(); ++j)
      r(i, j) = li * v(i, j) * std::polar(1.0, right_phases[j]);
  }
  return r;
}

int plaquette_sign(const Plaquette& p) {
  if (p.row_b > 2 || p.col_b > 2) {
    throw ValidationError("plaquette_sign is defined for 3x3 plaquettes");
  }
  const int row_parity = (p.row_a == 0 && p.row_b == 2) ? -1 : 1;
  const int col_parity = (p.col_a == 0 && p.col_b == 2) ? -1 : 1;
  return row_parity * col_parity;
}

PlaquetteScan all_plaquette_values(const ComplexMatrix& v) {
  if (!v.is_square() || v.rows() < 2) {
    throw ShapeError("all_plaquette_values requires a square matrix, n >= 2");
  }
  const std::size_t n = v.rows();
  PlaquetteScan scan;
  scan.single_invariant = (n == 3);
  for (std::size_t ra = 0; ra < n; ++ra)
    for (std::size_t rb = ra + 1; rb < n; ++rb)
      for (std::size_t ca = 0; ca < n; ++ca)
        for (std::size_t cb = ca + 1; cb < n; ++cb) {
          Plaquette p(ra, rb, ca, cb);
          scan.values.push_back({p, jarlskog_invariant(v, p)});
        }
  return scan;
}

}  // namespace ckmflag
