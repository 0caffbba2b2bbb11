#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ckmflag/flag.hpp"
#include "oracles.hpp"

using namespace ckmflag;
using testing::projector_gram_schmidt;
using testing::unipotent_inverse;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ComplexMatrix with_right_phases(const ComplexMatrix& w,
                                std::span<const double> phases) {
  ComplexMatrix out = w;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    const Complex factor = std::polar(1.0, phases[j]);
    for (std::size_t i = 0; i < w.rows(); ++i) out(i, j) *= factor;
  }
  return out;
}

}  // namespace

TEST_CASE("coordinate container") {
  CHECK(FlagCoordinates(3).count() == 3);
  CHECK(FlagCoordinates(6).count() == 15);
  CHECK_THROWS_AS(FlagCoordinates(1), ValidationError);
  CHECK_THROWS_AS(FlagCoordinates(3, {Complex(0, 0)}), ValidationError);
  CHECK_THROWS_AS(FlagCoordinates(3, {Complex(0, 0), Complex(0, 0),
                                      Complex(std::nan(""), 0)}),
                  ValidationError);

  const FlagCoordinates c =
      FlagCoordinates::for_n4(Complex(1, 0), Complex(2, 0), Complex(3, 0),
                              Complex(4, 0), Complex(5, 0), Complex(6, 0));
  CHECK(c.at(1, 0) == Complex(1, 0));
  CHECK(c.at(2, 0) == Complex(2, 0));
  CHECK(c.at(3, 0) == Complex(3, 0));
  CHECK(c.at(2, 1) == Complex(4, 0));
  CHECK(c.at(3, 1) == Complex(5, 0));
  CHECK(c.at(3, 2) == Complex(6, 0));
  CHECK_THROWS_AS(c.at(0, 0), ValidationError);
  CHECK_THROWS_AS(c.at(1, 2), ValidationError);
}

TEST_CASE("unipotent frame layout") {
  CHECK(max_abs_difference(unipotent_frame(FlagCoordinates(3)),
                           ComplexMatrix::identity(3)) == 0.0);

  const Complex x(0.5, 1.0), y(-2.0, 0.25), z(0.0, -1.0);
  const ComplexMatrix f = unipotent_frame(FlagCoordinates::for_n3(x, y, z));
  CHECK(f(0, 0) == Complex(1, 0));
  CHECK(f(1, 0) == x);
  CHECK(f(2, 0) == y);
  CHECK(f(2, 1) == z);
  CHECK(f(0, 1) == Complex(0, 0));
  CHECK(f(1, 2) == Complex(0, 0));
}

TEST_CASE("gram-schmidt unitary") {
  SUBCASE("zero coordinates give the identity at any n") {
    for (std::size_t n : {2, 3, 4, 6}) {
      CHECK(max_abs_difference(gram_schmidt_unitary(FlagCoordinates(n)),
                               ComplexMatrix::identity(n)) == 0.0);
    }
  }

  SUBCASE("hand value at x = 1") {
    const ComplexMatrix u = gram_schmidt_unitary(
        FlagCoordinates::for_n3(Complex(1, 0), Complex(0, 0), Complex(0, 0)));
    const ComplexMatrix expected(
        3, 3,
        {Complex(kInvSqrt2, 0), Complex(-kInvSqrt2, 0), Complex(0, 0),
         Complex(kInvSqrt2, 0), Complex(kInvSqrt2, 0), Complex(0, 0),
         Complex(0, 0), Complex(0, 0), Complex(1, 0)});
    CHECK(max_abs_difference(u, expected) < 1e-15);
  }

  SUBCASE("unitary to 1e-12 over radius-3 draws") {
    std::mt19937_64 rng(21);
    for (std::size_t n : {3, 4, 6}) {
      for (int trial = 0; trial < 100; ++trial) {
        const FlagCoordinates c = random_coordinates(rng, n, 3.0);
        CHECK(unitarity_defect(gram_schmidt_unitary(c)) < 1e-12);
      }
    }
  }

  SUBCASE("agrees with the projector-product construction") {
    std::mt19937_64 rng(22);
    for (std::size_t n : {3, 4, 6}) {
      for (int trial = 0; trial < 50; ++trial) {
        const FlagCoordinates c = random_coordinates(rng, n, 2.0);
        CHECK(max_abs_difference(gram_schmidt_unitary(c),
                                 projector_gram_schmidt(c)) < 1e-9);
      }
    }
  }

  SUBCASE("first column is the normalized frame column, bitwise") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const FlagCoordinates c = random_coordinates(rng, 3, 3.0);
      const ComplexMatrix u = gram_schmidt_unitary(c);
      const double root = std::sqrt(normalization_factors(c).deltas()[0]);
      CHECK(u(0, 0) == Complex(1.0, 0.0) / root);
      CHECK(u(1, 0) == c.at(1, 0) / root);
      CHECK(u(2, 0) == c.at(2, 0) / root);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const FlagCoordinates c = random_coordinates(rng, 6, 3.0);
      const ComplexMatrix u = gram_schmidt_unitary(c);
      double norm_sq = 1.0;
      for (std::size_t i = 1; i < 6; ++i) norm_sq += std::norm(c.at(i, 0));
      const double root = std::sqrt(norm_sq);
      CHECK(u(0, 0) == Complex(1.0, 0.0) / root);
      for (std::size_t i = 1; i < 6; ++i) CHECK(u(i, 0) == c.at(i, 0) / root);
    }
  }
}

TEST_CASE("closed-form unitary n = 3") {
  CHECK(max_abs_difference(closed_form_unitary_n3(FlagCoordinates(3)),
                           ComplexMatrix::identity(3)) == 0.0);

  SUBCASE("hand value at z = i") {
    const ComplexMatrix u = closed_form_unitary_n3(
        FlagCoordinates::for_n3(Complex(0, 0), Complex(0, 0), Complex(0, 1)));
    const ComplexMatrix expected(
        3, 3,
        {Complex(1, 0), Complex(0, 0), Complex(0, 0),
         Complex(0, 0), Complex(kInvSqrt2, 0), Complex(0, kInvSqrt2),
         Complex(0, 0), Complex(0, kInvSqrt2), Complex(kInvSqrt2, 0)});
    CHECK(max_abs_difference(u, expected) < 1e-15);
  }

  SUBCASE("matches gram-schmidt to 1e-13 on the unit disc") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 300; ++trial) {
      const FlagCoordinates c = random_coordinates(rng, 3, 1.0);
      CHECK(max_abs_difference(closed_form_unitary_n3(c),
                               gram_schmidt_unitary(c)) < 1e-13);
    }
  }

  SUBCASE("unitary at radius 3") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 200; ++trial) {
      const FlagCoordinates c = random_coordinates(rng, 3, 3.0);
      CHECK(unitarity_defect(closed_form_unitary_n3(c)) < 1e-12);
    }
  }

  CHECK_THROWS_AS(closed_form_unitary_n3(FlagCoordinates(4)), ValidationError);
}

TEST_CASE("closed-form unitary n = 4") {
  CHECK(max_abs_difference(closed_form_unitary_n4(FlagCoordinates(4)),
                           ComplexMatrix::identity(4)) == 0.0);

  SUBCASE("x1 = 1 produces a plane rotation by 45 degrees") {
    const ComplexMatrix u = closed_form_unitary_n4(FlagCoordinates::for_n4(
        Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0),
        Complex(0, 0), Complex(0, 0)));
    ComplexMatrix expected = ComplexMatrix::identity(4);
    expected(0, 0) = kInvSqrt2;
    expected(0, 1) = -kInvSqrt2;
    expected(1, 0) = kInvSqrt2;
    expected(1, 1) = kInvSqrt2;
    CHECK(max_abs_difference(u, expected) < 1e-15);
  }

  SUBCASE("matches gram-schmidt to 1e-12 at radius 3") {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 300; ++trial) {
      const FlagCoordinates c = random_coordinates(rng, 4, 3.0);
      CHECK(max_abs_difference(closed_form_unitary_n4(c),
                               gram_schmidt_unitary(c)) < 1e-12);
      CHECK(unitarity_defect(closed_form_unitary_n4(c)) < 1e-12);
    }
  }

  CHECK_THROWS_AS(closed_form_unitary_n4(FlagCoordinates(3)), ValidationError);
}

TEST_CASE("normalization factors") {
  SUBCASE("n = 3 values") {
    const NormalizationFactors trivial =
        normalization_factors(FlagCoordinates(3));
    CHECK(trivial.deltas()[0] == 1.0);
    CHECK(trivial.deltas()[1] == 1.0);

    const NormalizationFactors hand = normalization_factors(
        FlagCoordinates::for_n3(Complex(1, 0), Complex(0, 2), Complex(-1, 0)));
    CHECK(hand.deltas()[0] == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(hand.deltas()[1] == doctest::Approx(7.0).epsilon(1e-14));
  }

  SUBCASE("n = 4 deltas match the orthogonalization chain") {
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 100; ++trial) {
      const FlagCoordinates c = random_coordinates(rng, 4, 2.0);
      const NormalizationFactors deltas = normalization_factors(c);
      const OrthonormalizedFrame frame = orthonormalize_frame(c);
      const double d1 = frame.column_norms[0] * frame.column_norms[0];
      const double d2 = frame.column_norms[1] * frame.column_norms[1] * d1;
      // The last delta is the squared norm of the final row of the
      // inverse frame.
      const ComplexMatrix inv = unipotent_inverse(unipotent_frame(c));
      double d3 = 0.0;
      for (std::size_t j = 0; j < 4; ++j) d3 += std::norm(inv(3, j));
      CHECK(deltas.deltas()[0] ==
            doctest::Approx(d1).epsilon(1e-12));
      CHECK(deltas.deltas()[1] ==
            doctest::Approx(d2).epsilon(1e-12));
      CHECK(deltas.deltas()[2] ==
            doctest::Approx(d3).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(normalization_factors(FlagCoordinates(5)),
                  NotImplementedError);
  CHECK_THROWS_AS(NormalizationFactors({0.5}), ValidationError);
}

TEST_CASE("kahler data") {
  const KahlerData origin = kahler_data(FlagCoordinates(3));
  CHECK(origin.potential == 0.0);
  CHECK(origin.volume_density == 2.0);

  const KahlerData at_x1 = kahler_data(
      FlagCoordinates::for_n3(Complex(1, 0), Complex(0, 0), Complex(0, 0)));
  CHECK(at_x1.potential == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(at_x1.volume_density == doctest::Approx(0.5).epsilon(1e-14));

  SUBCASE("density stays in (0, 2]") {
    std::mt19937_64 rng(28);
    for (int trial = 0; trial < 200; ++trial) {
      const KahlerData data = kahler_data(random_coordinates(rng, 3, 3.0));
      CHECK(data.volume_density > 0.0);
      CHECK(data.volume_density <= 2.0);
      CHECK(data.potential >= 0.0);
    }
  }

  CHECK_THROWS_AS(kahler_data(FlagCoordinates(4)), NotImplementedError);
}

TEST_CASE("coordinate extraction") {
  SUBCASE("identity maps to zero coordinates") {
    const FlagCoordinates c =
        coords_from_unitary(ComplexMatrix::identity(4));
    CHECK(max_abs_difference(c, FlagCoordinates(4)) == 0.0);
  }

  SUBCASE("round trip at n = 3, 4, 6") {
    std::mt19937_64 rng(29);
    for (std::size_t n : {3, 4, 6}) {
      for (int trial = 0; trial < 100; ++trial) {
        const FlagCoordinates c = random_coordinates(rng, n, 3.0);
        const FlagCoordinates back =
            coords_from_unitary(gram_schmidt_unitary(c));
        CHECK(max_abs_difference(back, c) < 1e-10);
      }
    }
  }

  SUBCASE("right diagonal phases do not change the coordinates") {
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                 std::numbers::pi);
    for (std::size_t n : {3, 4, 6}) {
      for (int trial = 0; trial < 50; ++trial) {
        const FlagCoordinates c = random_coordinates(rng, n, 3.0);
        const ComplexMatrix w = gram_schmidt_unitary(c);
        std::vector<double> phases(n);
        for (double& p : phases) p = angle(rng);
        const FlagCoordinates a = coords_from_unitary(w);
        const FlagCoordinates b =
            coords_from_unitary(with_right_phases(w, phases));
        CHECK(max_abs_difference(a, b) < 1e-10);
      }
    }
  }

  SUBCASE("upper factor of a unitary has unit modulus product") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix w =
          gram_schmidt_unitary(random_coordinates(rng, 4, 3.0));
      const LuFactors lu = lu_unpivoted(w);
      double product = 1.0;
      for (std::size_t k = 0; k < 4; ++k) product *= std::abs(lu.upper(k, k));
      CHECK(product == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  SUBCASE("n = 3 extraction reduces to entry ratios") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix w =
          gram_schmidt_unitary(random_coordinates(rng, 3, 2.0));
      const FlagCoordinates c = coords_from_unitary(w);
      CHECK(std::abs(c.at(1, 0) - w(1, 0) / w(0, 0)) < 1e-12);
      CHECK(std::abs(c.at(2, 0) - w(2, 0) / w(0, 0)) < 1e-12);
      CHECK(std::abs(c.at(2, 1) + std::conj(w(1, 2) / w(2, 2))) < 1e-12);
    }
  }

  SUBCASE("non-unitary input is rejected") {
    ComplexMatrix not_unitary = ComplexMatrix::identity(3);
    not_unitary(0, 0) = 2.0;
    CHECK_THROWS_AS(coords_from_unitary(not_unitary), ValidationError);
  }

  SUBCASE("vanishing leading minor is a gauge singularity") {
    ComplexMatrix permuted(3, 3);
    permuted(0, 1) = 1.0;
    permuted(1, 0) = 1.0;
    permuted(2, 2) = 1.0;
    CHECK_THROWS_AS(coords_from_unitary(permuted), GaugeSingularError);
  }
}
