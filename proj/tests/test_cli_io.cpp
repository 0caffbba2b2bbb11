#include <doctest.h>

#include <random>

#include "io.hpp"
#include "oracles.hpp"

using namespace ckmflag;
using namespace ckmflag::cli;

TEST_CASE("complex and matrix serialization round trips") {
  std::mt19937_64 rng(91);
  const ComplexMatrix m = testing::random_matrix(rng, 3, 4);
  const json encoded = matrix_to_json(m);
  const ComplexMatrix decoded = matrix_from_json(encoded, "matrix");
  CHECK(decoded.rows() == 3);
  CHECK(decoded.cols() == 4);
  CHECK(max_abs_difference(decoded, m) == 0.0);

  const json reparsed = json::parse(dump_document(encoded));
  CHECK(reparsed == encoded);
}

TEST_CASE("coordinate documents") {
  SUBCASE("n = 3 uses named keys") {
    const FlagCoordinates c = FlagCoordinates::for_n3(
        Complex(0.25, -1.0), Complex(2.0, 0.125), Complex(-0.5, 0.75));
    const json doc = coords_to_json(c);
    CHECK(doc["coords"].contains("x"));
    CHECK(doc["coords"].contains("z"));
    const FlagCoordinates back = coords_from_json(doc, "doc");
    CHECK(max_abs_difference(back, c) == 0.0);
  }

  SUBCASE("n = 4 uses indexed names, n = 6 uses pair keys") {
    std::mt19937_64 rng(92);
    const FlagCoordinates c4 = random_coordinates(rng, 4, 2.0);
    const json doc4 = coords_to_json(c4);
    CHECK(doc4["coords"].contains("x1"));
    CHECK(doc4["coords"].contains("z1"));
    CHECK(max_abs_difference(coords_from_json(doc4, "doc"), c4) == 0.0);

    const FlagCoordinates c6 = random_coordinates(rng, 6, 2.0);
    const json doc6 = coords_to_json(c6);
    CHECK(doc6["coords"].contains("2,1"));
    CHECK(doc6["coords"].contains("6,5"));
    CHECK(max_abs_difference(coords_from_json(doc6, "doc"), c6) == 0.0);
  }

  SUBCASE("strict parsing rejects unknown and missing keys") {
    json doc = coords_to_json(FlagCoordinates(3));
    doc["coords"]["extra"] = json::array({0.0, 0.0});
    CHECK_THROWS_WITH_AS(coords_from_json(doc, "doc"),
                         doctest::Contains("unknown key 'extra'"),
                         ValidationError);

    json missing = coords_to_json(FlagCoordinates(3));
    missing["coords"].erase("y");
    CHECK_THROWS_WITH_AS(coords_from_json(missing, "doc"),
                         doctest::Contains("missing key 'y'"),
                         ValidationError);

    json top = coords_to_json(FlagCoordinates(3));
    top["comment"] = "hello";
    CHECK_THROWS_AS(coords_from_json(top, "doc"), ValidationError);
  }

  SUBCASE("malformed complex entries name the field") {
    json doc = coords_to_json(FlagCoordinates(3));
    doc["coords"]["x"] = json::array({1.0});
    CHECK_THROWS_WITH_AS(coords_from_json(doc, "doc"),
                         doctest::Contains("doc.coords.x"), ValidationError);
  }
}

TEST_CASE("mass lists") {
  const json good = json::array({1.0, 2.0, 3.0});
  CHECK(masses_from_json(good, "masses").count() == 3);
  const json decreasing = json::array({3.0, 2.0, 1.0});
  CHECK_THROWS_WITH_AS(masses_from_json(decreasing, "masses"),
                       doctest::Contains("masses"), ValidationError);
}

TEST_CASE("fit documents") {
  json doc{{"n", 3},
           {"target_magnitudes",
            {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}},
           {"target_j", 0.0}};
  const FitProblem problem = fit_problem_from_json(doc);
  CHECK(problem.n == 3);
  CHECK(problem.target_j.has_value());
  CHECK(problem.is_consistent());

  SUBCASE("unknown keys rejected") {
    doc["stray"] = 1;
    CHECK_THROWS_WITH_AS(fit_problem_from_json(doc),
                         doctest::Contains("unknown key 'stray'"),
                         ValidationError);
  }
  SUBCASE("weights parsed") {
    doc["weights"] = json{{"jarlskog", 10.0}};
    CHECK(fit_problem_from_json(doc).j_weight == 10.0);
  }
  SUBCASE("bounds parsed") {
    doc["bounds"] = 5.0;
    CHECK(fit_problem_from_json(doc).coordinate_bound == 5.0);
  }
}

TEST_CASE("plaquette documents use 1-based indices") {
  const json doc{{"rows", {1, 3}}, {"cols", {1, 3}}};
  const Plaquette p = plaquette_from_json(doc, "plaquette");
  CHECK(p.row_a == 0);
  CHECK(p.row_b == 2);
  const json back = plaquette_to_json(p);
  CHECK(back["rows"][0] == 1);
  CHECK(back["rows"][1] == 3);

  const json zero_based{{"rows", {0, 2}}, {"cols", {1, 3}}};
  CHECK_THROWS_AS(plaquette_from_json(zero_based, "plaquette"),
                  ValidationError);
}

TEST_CASE("canonical dump is deterministic and reparses") {
  const json doc{{"b", 1.0 / 3.0}, {"a", json::array({0.1, -2.5e-17})}};
  const std::string once = dump_document(doc);
  const std::string twice = dump_document(doc);
  CHECK(once == twice);
  CHECK(json::parse(once) == doc);
  CHECK(once.back() == '\n');
}
