#include "run.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ckmflag/sampling.hpp"
#include "io.hpp"

namespace ckmflag::cli {

namespace {

struct Tolerances {
  double unitarity = 1e-8;
  double pivot = 1e-10;
  double fit_threshold = 1e-8;
  double consistency = 1e-6;
};

Tolerances resolve_tolerances(const RunConfig& config) {
  Tolerances t;
  for (const auto& [key, value] : config.tolerance_overrides) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ValidationError("tolerance '" + key + "' must be positive");
    }
    if (key == "unitarity") {
      t.unitarity = value;
    } else if (key == "pivot") {
      t.pivot = value;
    } else if (key == "fit_threshold") {
      t.fit_threshold = value;
    } else if (key == "consistency") {
      t.consistency = value;
    } else {
      throw ValidationError("unknown tolerance '" + key +
                            "' (known: unitarity, pivot, fit_threshold, "
                            "consistency)");
    }
  }
  return t;
}

int emit(const RunConfig& config, const json& doc) {
  write_output(dump_document(doc), config.output_path);
  return 0;
}

int run_build_unitary(const RunConfig& config) {
  FlagCoordinates coords = config.input_path.empty()
                               ? FlagCoordinates(config.n)
                               : coords_from_json(
                                     load_document(config.input_path), "input");
  const ComplexMatrix u = gram_schmidt_unitary(coords);
  if (config.csv) {
    write_output(matrix_to_csv(u), config.output_path);
    return 0;
  }
  return emit(config, json{{"n", coords.dim()}, {"matrix", matrix_to_json(u)}});
}

int run_extract_coords(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw ValidationError("extract-coords requires --input");
  }
  const json doc = load_document(config.input_path);
  check_keys(doc, {"matrix"}, {"n"}, "input");
  const ComplexMatrix w = matrix_from_json(doc["matrix"], "input.matrix");
  if (doc.contains("n") &&
      (!doc["n"].is_number_integer() ||
       doc["n"].get<std::size_t>() != w.rows())) {
    throw ValidationError("field 'input.n': does not match the matrix size");
  }
  const Tolerances tol = resolve_tolerances(config);
  const FlagCoordinates coords =
      coords_from_unitary(w, tol.unitarity, tol.pivot);
  return emit(config, coords_to_json(coords));
}

std::pair<FlagCoordinates, FlagCoordinates> load_pair(const json& doc) {
  return {coords_from_json(doc.at("left"), "left"),
          coords_from_json(doc.at("right"), "right")};
}

int run_ckm(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw ValidationError("ckm requires --input with a {left, right} pair");
  }
  const json doc = load_document(config.input_path);
  check_keys(doc, {"left", "right"}, {}, "input");
  const auto [left, right] = load_pair(doc);
  const CkmResult result = build_ckm(left, right);
  if (config.csv) {
    write_output(matrix_to_csv(result.v), config.output_path);
    return 0;
  }
  json out{{"n", left.dim()},
           {"v", matrix_to_json(result.v)},
           {"f", matrix_to_json(result.f)},
           {"left_deltas", result.left_deltas.deltas()},
           {"right_deltas", result.right_deltas.deltas()}};
  return emit(config, out);
}

int run_jarlskog(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw ValidationError("jarlskog requires --input with a {left, right} pair");
  }
  const json doc = load_document(config.input_path);
  check_keys(doc, {"left", "right"}, {"plaquette"}, "input");
  const auto [left, right] = load_pair(doc);
  const Plaquette plaquette =
      doc.contains("plaquette")
          ? plaquette_from_json(doc["plaquette"], "input.plaquette")
          : Plaquette::corners();
  const CkmResult result = build_ckm(left, right);
  json out{{"n", left.dim()},
           {"plaquette", plaquette_to_json(plaquette)},
           {"value", jarlskog_invariant(result.v, plaquette)},
           {"single_invariant", left.dim() == 3}};
  if (left.dim() > 3) {
    const PlaquetteScan scan = all_plaquette_values(result.v);
    json values = json::array();
    for (const PlaquetteValue& pv : scan.values) {
      values.push_back(json{{"plaquette", plaquette_to_json(pv.plaquette)},
                            {"value", pv.value}});
    }
    out["all_plaquettes"] = std::move(values);
  }
  return emit(config, out);
}

int run_det_commutator(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw ValidationError(
        "det-commutator requires --input with {left, right, masses, "
        "masses_prime}");
  }
  const json doc = load_document(config.input_path);
  check_keys(doc, {"left", "right", "masses", "masses_prime"}, {}, "input");
  const auto [left, right] = load_pair(doc);
  const MassSpectrum s = masses_from_json(doc["masses"], "masses");
  const MassSpectrum s_prime =
      masses_from_json(doc["masses_prime"], "masses_prime");
  if (s.count() != left.dim() || s_prime.count() != right.dim()) {
    throw ValidationError(
        "field 'masses': spectra must match the coordinate dimension");
  }
  const Tolerances tol = resolve_tolerances(config);
  const ComplexMatrix u = gram_schmidt_unitary(left);
  const ComplexMatrix u_prime = gram_schmidt_unitary(right);
  const ComplexMatrix m = build_mass_matrix(u, s, tol.unitarity);
  const ComplexMatrix m_prime = build_mass_matrix(u_prime, s_prime, tol.unitarity);
  const Complex det = commutator_det(m, m_prime);
  const DetParity parity = det_parity_check(m, m_prime);
  json out{{"n", left.dim()},
           {"determinant", complex_to_json(det)},
           {"parity", parity == DetParity::real ? "real" : "pure_imaginary"}};
  if (left.dim() == 3) {
    const JarlskogIdentity identity =
        jarlskog_identity_check(left, right, s, s_prime);
    out["jarlskog_from_determinant"] = identity.from_determinant;
    out["jarlskog_from_plaquette"] = identity.from_plaquette;
  }
  return emit(config, out);
}

int run_pdg_convert(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw ValidationError(
        "pdg-convert requires --input with either {angles} or a coordinates "
        "document");
  }
  const json doc = load_document(config.input_path);
  if (doc.is_object() && doc.contains("angles")) {
    check_keys(doc, {"angles"}, {}, "input");
    const PdgAngles a = angles_from_json(doc["angles"], "input.angles");
    const FlagCoordinates coords = pdg_to_coords(a);
    return emit(config, json{{"coords", coords_to_json(coords)},
                             {"unitary", matrix_to_json(pdg_unitary(a))}});
  }
  const FlagCoordinates coords = coords_from_json(doc, "input");
  const PdgAngles a = coords_to_pdg(coords);
  return emit(config, json{{"angles", angles_to_json(a)}});
}

int run_fit(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw ValidationError("fit requires --input with a fit document");
  }
  const Tolerances tol = resolve_tolerances(config);
  FitProblem problem = fit_problem_from_json(load_document(config.input_path));
  problem.convergence_threshold = tol.fit_threshold;
  problem.consistency_tolerance = tol.consistency;
  const FitResult result = fit(problem, config.seed);
  emit(config, fit_result_to_json(problem, result));
  return result.converged ? 0 : 2;
}

// One named consistency check of the internal oracle suite.
struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t passes = 0;
  double max_error = 0.0;
};

json report_to_json(const CheckReport& r) {
  return json{{"name", r.name},
              {"samples", r.samples},
              {"passes", r.passes},
              {"max_error", r.max_error}};
}

int run_self_check(const RunConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::vector<CheckReport> reports;

  {
    CheckReport r{"closed-form-unitary-n3", 400, 0, 0.0};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const FlagCoordinates c = random_coordinates(rng, 3, 3.0);
      const double err =
          std::max(max_abs_difference(closed_form_unitary_n3(c),
                                      gram_schmidt_unitary(c)),
                   unitarity_defect(closed_form_unitary_n3(c)));
      r.max_error = std::max(r.max_error, err);
      if (err < 1e-12) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"closed-form-unitary-n4", 400, 0, 0.0};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const FlagCoordinates c = random_coordinates(rng, 4, 3.0);
      const double err =
          std::max(max_abs_difference(closed_form_unitary_n4(c),
                                      gram_schmidt_unitary(c)),
                   unitarity_defect(closed_form_unitary_n4(c)));
      r.max_error = std::max(r.max_error, err);
      if (err < 1e-12) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"ckm-entry-forms-n3", 200, 0, 0.0};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const FlagCoordinates left = random_coordinates(rng, 3, 3.0);
      const FlagCoordinates right = random_coordinates(rng, 3, 3.0);
      const CkmResult result = build_ckm(left, right);
      ComplexMatrix rescaled(3, 3);
      const auto dl = result.left_deltas.deltas();
      const auto dr = result.right_deltas.deltas();
      const double row_scale[3] = {std::sqrt(dl[0]),
                                   std::sqrt(dl[0] * dl[1]),
                                   std::sqrt(dl[1])};
      const double col_scale[3] = {std::sqrt(dr[0]),
                                   std::sqrt(dr[0] * dr[1]),
                                   std::sqrt(dr[1])};
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          rescaled(i, j) = result.f(i, j) / (row_scale[i] * col_scale[j]);
      const double err = max_abs_difference(rescaled, result.v);
      r.max_error = std::max(r.max_error, err);
      if (err < 1e-12) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"ckm-entry-forms-n4", 200, 0, 0.0};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const FlagCoordinates left = random_coordinates(rng, 4, 3.0);
      const FlagCoordinates right = random_coordinates(rng, 4, 3.0);
      const CkmResult result = build_ckm(left, right);
      const auto dl = result.left_deltas.deltas();
      const auto dr = result.right_deltas.deltas();
      const double row_scale[4] = {std::sqrt(dl[0]), std::sqrt(dl[0] * dl[1]),
                                   dl[0] * std::sqrt(dl[1] * dl[2]),
                                   std::sqrt(dl[2])};
      const double col_scale[4] = {std::sqrt(dr[0]), std::sqrt(dr[0] * dr[1]),
                                   dr[0] * std::sqrt(dr[1] * dr[2]),
                                   std::sqrt(dr[2])};
      ComplexMatrix rescaled(4, 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          rescaled(i, j) = result.f(i, j) / (row_scale[i] * col_scale[j]);
      const double err = max_abs_difference(rescaled, result.v);
      r.max_error = std::max(r.max_error, err);
      if (err < 1e-11) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"jarlskog-closed-form", 200, 0, 0.0};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const FlagCoordinates left = random_coordinates(rng, 3, 3.0);
      const FlagCoordinates right = random_coordinates(rng, 3, 3.0);
      const CkmResult result = build_ckm(left, right);
      const double err =
          std::abs(jarlskog_from_coords(left, right) -
                   jarlskog_invariant(result.v, Plaquette::corners()));
      r.max_error = std::max(r.max_error, err);
      if (err < 1e-12) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"jarlskog-determinant-identity", 200, 0, 0.0};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const FlagCoordinates left = random_coordinates(rng, 3, 1.0);
      const FlagCoordinates right = random_coordinates(rng, 3, 1.0);
      const MassSpectrum s(random_log_uniform_masses(rng, 3));
      const MassSpectrum s_prime(random_log_uniform_masses(rng, 3));
      const JarlskogIdentity identity =
          jarlskog_identity_check(left, right, s, s_prime);
      const double err =
          std::abs(identity.from_determinant - identity.from_plaquette);
      const double bound =
          std::max(1e-9 * std::abs(identity.from_plaquette), 1e-12);
      r.max_error = std::max(r.max_error, err);
      if (err <= bound) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"determinant-parity", 201, 0, 0.0};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const std::size_t n = 2 + k % 3;
      const FlagCoordinates left = random_coordinates(rng, n, 1.0);
      const FlagCoordinates right = random_coordinates(rng, n, 1.0);
      const MassSpectrum s(random_log_uniform_masses(rng, n));
      const MassSpectrum s_prime(random_log_uniform_masses(rng, n));
      const ComplexMatrix m = build_mass_matrix(gram_schmidt_unitary(left), s);
      const ComplexMatrix m_prime =
          build_mass_matrix(gram_schmidt_unitary(right), s_prime);
      const DetParity expected =
          (n % 2 == 0) ? DetParity::real : DetParity::pure_imaginary;
      try {
        if (det_parity_check(m, m_prime) == expected) ++r.passes;
      } catch (const InvariantViolationError&) {
      }
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"plaquette-consistency", 200, 0, 0.0};
    std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                 std::numbers::pi);
    for (std::size_t k = 0; k < r.samples; ++k) {
      const FlagCoordinates left = random_coordinates(rng, 3, 3.0);
      const FlagCoordinates right = random_coordinates(rng, 3, 3.0);
      const CkmResult result = build_ckm(left, right);
      const PlaquetteScan scan = all_plaquette_values(result.v);
      double lo = 1e300, hi = 0.0;
      for (const PlaquetteValue& pv : scan.values) {
        lo = std::min(lo, std::abs(pv.value));
        hi = std::max(hi, std::abs(pv.value));
      }
      std::vector<double> lp(3), rp(3);
      for (double& p : lp) p = angle(rng);
      for (double& p : rp) p = angle(rng);
      const double j0 = jarlskog_invariant(result.v, Plaquette::corners());
      const double j1 =
          jarlskog_invariant(rephase(result.v, lp, rp), Plaquette::corners());
      r.max_error = std::max(r.max_error, hi - lo);
      if (hi - lo < 1e-12 && std::abs(j1 - j0) < 1e-13) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"coordinate-round-trip", 201, 0, 0.0};
    std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                 std::numbers::pi);
    const std::size_t dims[3] = {3, 4, 6};
    for (std::size_t k = 0; k < r.samples; ++k) {
      const std::size_t n = dims[k % 3];
      const FlagCoordinates c = random_coordinates(rng, n, 3.0);
      ComplexMatrix w = gram_schmidt_unitary(c);
      std::vector<double> phases(n);
      for (double& p : phases) p = angle(rng);
      for (std::size_t j = 0; j < n; ++j) {
        const Complex factor = std::polar(1.0, phases[j]);
        for (std::size_t i = 0; i < n; ++i) w(i, j) *= factor;
      }
      const double err = max_abs_difference(coords_from_unitary(w), c);
      r.max_error = std::max(r.max_error, err);
      if (err < 1e-10) ++r.passes;
    }
    reports.push_back(r);
  }
  {
    CheckReport r{"pdg-correspondence", 200, 0, 0.0};
    std::uniform_real_distribution<double> theta(-1.3, 1.3);
    std::uniform_real_distribution<double> phase(-std::numbers::pi,
                                                 std::numbers::pi);
    for (std::size_t k = 0; k < r.samples; ++k) {
      PdgAngles a;
      a.theta12 = theta(rng);
      a.theta13 = theta(rng);
      a.theta23 = theta(rng);
      a.delta = phase(rng);
      const double err = max_abs_difference(
          coords_from_unitary(pdg_unitary(a)), pdg_to_coords(a));
      r.max_error = std::max(r.max_error, err);
      if (err < 1e-11) ++r.passes;
    }
    reports.push_back(r);
  }

  bool all_passed = true;
  json checks = json::array();
  for (const CheckReport& r : reports) {
    if (r.passes != r.samples) all_passed = false;
    checks.push_back(report_to_json(r));
  }
  emit(config, json{{"seed", config.seed},
                    {"checks", std::move(checks)},
                    {"all_passed", all_passed}});
  return all_passed ? 0 : 2;
}

}  // namespace

int run(const RunConfig& config) {
  resolve_tolerances(config);  // reject unknown overrides for any command
  switch (config.command) {
    case RunConfig::Command::build_unitary:
      return run_build_unitary(config);
    case RunConfig::Command::extract_coords:
      return run_extract_coords(config);
    case RunConfig::Command::ckm:
      return run_ckm(config);
    case RunConfig::Command::jarlskog:
      return run_jarlskog(config);
    case RunConfig::Command::det_commutator:
      return run_det_commutator(config);
    case RunConfig::Command::pdg_convert:
      return run_pdg_convert(config);
    case RunConfig::Command::fit:
      return run_fit(config);
    case RunConfig::Command::self_check:
      return run_self_check(config);
  }
  throw ValidationError("unknown command");
}

}  // namespace ckmflag::cli
