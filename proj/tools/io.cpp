#include "io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ckmflag::cli {

namespace {

std::string pair_key(std::size_t i, std::size_t j) {
  // 1-based "i,j" keys for general n.
  return std::to_string(i + 1) + "," + std::to_string(j + 1);
}

std::vector<std::string> coordinate_keys(std::size_t n) {
  if (n == 3) return {"x", "y", "z"};
  if (n == 4) return {"x1", "x2", "x3", "y1", "y2", "z1"};
  std::vector<std::string> keys;
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) keys.push_back(pair_key(i, j));
  return keys;
}

std::size_t positive_integer(const json& value, const std::string& context) {
  if (!value.is_number_unsigned() && !value.is_number_integer()) {
    throw ValidationError("field '" + context + "': expected an integer");
  }
  const auto v = value.get<long long>();
  if (v < 2 || v > 8) {
    throw ValidationError("field '" + context + "': n must be between 2 and 8");
  }
  return static_cast<std::size_t>(v);
}

std::string format_real(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

void check_keys(const json& obj, const std::vector<std::string>& required,
                const std::vector<std::string>& optional,
                const std::string& context) {
  if (!obj.is_object()) {
    throw ValidationError("field '" + context + "': expected an object");
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) {
      throw ValidationError("field '" + context + "': missing key '" + key +
                            "'");
    }
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) {
      throw ValidationError("field '" + context + "': unknown key '" + key +
                            "'");
    }
  }
}

double finite_number(const json& value, const std::string& context) {
  if (!value.is_number()) {
    throw ValidationError("field '" + context + "': expected a number");
  }
  const double v = value.get<double>();
  if (!std::isfinite(v)) {
    throw ValidationError("field '" + context + "': value must be finite");
  }
  return v;
}

Complex complex_from_json(const json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 2) {
    throw ValidationError("field '" + context +
                          "': expected a [re, im] pair");
  }
  return Complex(finite_number(value[0], context + "[0]"),
                 finite_number(value[1], context + "[1]"));
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

ComplexMatrix matrix_from_json(const json& value, const std::string& context) {
  if (!value.is_array() || value.empty()) {
    throw ValidationError("field '" + context +
                          "': expected a non-empty array of rows");
  }
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  std::vector<Complex> entries;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = value[i];
    const std::string row_context = context + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.empty()) {
      throw ValidationError("field '" + row_context +
                            "': expected a non-empty row");
    }
    if (i == 0) {
      cols = row.size();
      entries.reserve(rows * cols);
    } else if (row.size() != cols) {
      throw ValidationError("field '" + row_context + "': ragged row length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      entries.push_back(complex_from_json(
          row[j], row_context + "[" + std::to_string(j) + "]"));
    }
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string matrix_to_csv(const ComplexMatrix& m) {
  std::ostringstream out;
  out << "i,j,re,im\n";
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << (i + 1) << ',' << (j + 1) << ',' << format_real(m(i, j).real())
          << ',' << format_real(m(i, j).imag()) << '\n';
  return out.str();
}

FlagCoordinates coords_from_json(const json& doc, const std::string& context) {
  check_keys(doc, {"n", "coords"}, {}, context);
  const std::size_t n = positive_integer(doc["n"], context + ".n");
  const std::vector<std::string> keys = coordinate_keys(n);
  check_keys(doc["coords"], keys, {}, context + ".coords");
  std::vector<Complex> coords;
  coords.reserve(keys.size());
  for (const std::string& key : keys) {
    coords.push_back(complex_from_json(doc["coords"][key],
                                       context + ".coords." + key));
  }
  return FlagCoordinates(n, std::move(coords));
}

json coords_to_json(const FlagCoordinates& c) {
  const std::vector<std::string> keys = coordinate_keys(c.dim());
  json coords = json::object();
  for (std::size_t k = 0; k < keys.size(); ++k)
    coords[keys[k]] = complex_to_json(c.values()[k]);
  return json{{"n", c.dim()}, {"coords", std::move(coords)}};
}

MassSpectrum masses_from_json(const json& value, const std::string& context) {
  if (!value.is_array() || value.empty()) {
    throw ValidationError("field '" + context +
                          "': expected a non-empty array of masses");
  }
  std::vector<double> masses;
  masses.reserve(value.size());
  for (std::size_t k = 0; k < value.size(); ++k)
    masses.push_back(
        finite_number(value[k], context + "[" + std::to_string(k) + "]"));
  try {
    return MassSpectrum(std::move(masses));
  } catch (const ValidationError& e) {
    throw ValidationError("field '" + context + "': " + e.what());
  }
}

PdgAngles angles_from_json(const json& doc, const std::string& context) {
  check_keys(doc, {"theta12", "theta13", "theta23", "delta"},
             {"alpha", "beta"}, context);
  PdgAngles a;
  a.theta12 = finite_number(doc["theta12"], context + ".theta12");
  a.theta13 = finite_number(doc["theta13"], context + ".theta13");
  a.theta23 = finite_number(doc["theta23"], context + ".theta23");
  a.delta = finite_number(doc["delta"], context + ".delta");
  if (doc.contains("alpha")) a.alpha = finite_number(doc["alpha"], context + ".alpha");
  if (doc.contains("beta")) a.beta = finite_number(doc["beta"], context + ".beta");
  return a;
}

json angles_to_json(const PdgAngles& a) {
  return json{{"theta12", a.theta12}, {"theta13", a.theta13},
              {"theta23", a.theta23}, {"delta", a.delta},
              {"alpha", a.alpha},     {"beta", a.beta}};
}

FitProblem fit_problem_from_json(const json& doc) {
  check_keys(doc, {"n", "target_magnitudes"},
             {"target_j", "weights", "bounds"}, "fit");
  FitProblem problem;
  problem.n = positive_integer(doc["n"], "fit.n");
  const json& grid = doc["target_magnitudes"];
  if (!grid.is_array() || grid.size() != problem.n) {
    throw ValidationError("field 'fit.target_magnitudes': expected " +
                          std::to_string(problem.n) + " rows");
  }
  for (std::size_t i = 0; i < problem.n; ++i) {
    const json& row = grid[i];
    const std::string row_context =
        "fit.target_magnitudes[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != problem.n) {
      throw ValidationError("field '" + row_context + "': expected " +
                            std::to_string(problem.n) + " entries");
    }
    for (std::size_t j = 0; j < problem.n; ++j) {
      problem.target_magnitudes.push_back(
          finite_number(row[j], row_context + "[" + std::to_string(j) + "]"));
    }
  }
  if (doc.contains("target_j")) {
    problem.target_j = finite_number(doc["target_j"], "fit.target_j");
  }
  if (doc.contains("weights")) {
    check_keys(doc["weights"], {}, {"magnitudes", "jarlskog"}, "fit.weights");
    if (doc["weights"].contains("magnitudes")) {
      const json& wgrid = doc["weights"]["magnitudes"];
      if (!wgrid.is_array() || wgrid.size() != problem.n) {
        throw ValidationError("field 'fit.weights.magnitudes': expected " +
                              std::to_string(problem.n) + " rows");
      }
      for (std::size_t i = 0; i < problem.n; ++i) {
        const json& row = wgrid[i];
        if (!row.is_array() || row.size() != problem.n) {
          throw ValidationError(
              "field 'fit.weights.magnitudes': ragged rows");
        }
        for (std::size_t j = 0; j < problem.n; ++j) {
          problem.magnitude_weights.push_back(finite_number(
              row[j], "fit.weights.magnitudes[" + std::to_string(i) + "][" +
                          std::to_string(j) + "]"));
        }
      }
    }
    if (doc["weights"].contains("jarlskog")) {
      problem.j_weight =
          finite_number(doc["weights"]["jarlskog"], "fit.weights.jarlskog");
    }
  }
  if (doc.contains("bounds")) {
    problem.coordinate_bound = finite_number(doc["bounds"], "fit.bounds");
  }
  problem.validate();
  return problem;
}

json fit_result_to_json(const FitProblem& problem, const FitResult& r) {
  return json{{"n", problem.n},
              {"left", coords_to_json(r.left)},
              {"right", coords_to_json(r.right)},
              {"residual_norm", r.residual_norm},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"consistent", problem.is_consistent()},
              {"per_residual", r.per_residual}};
}

Plaquette plaquette_from_json(const json& doc, const std::string& context) {
  check_keys(doc, {"rows", "cols"}, {}, context);
  auto pair = [&](const json& value, const std::string& field) {
    if (!value.is_array() || value.size() != 2) {
      throw ValidationError("field '" + field +
                            "': expected two 1-based indices");
    }
    const double a = finite_number(value[0], field + "[0]");
    const double b = finite_number(value[1], field + "[1]");
    if (a < 1 || b < 1 || a != std::floor(a) || b != std::floor(b)) {
      throw ValidationError("field '" + field +
                            "': indices must be integers >= 1");
    }
    return std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(a) - 1,
                                               static_cast<std::size_t>(b) - 1);
  };
  const auto rows = pair(doc["rows"], context + ".rows");
  const auto cols = pair(doc["cols"], context + ".cols");
  try {
    return Plaquette(rows.first, rows.second, cols.first, cols.second);
  } catch (const ValidationError& e) {
    throw ValidationError("field '" + context + "': " + e.what());
  }
}

json plaquette_to_json(const Plaquette& p) {
  return json{{"rows", {p.row_a + 1, p.row_b + 1}},
              {"cols", {p.col_a + 1, p.col_b + 1}}};
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open input file '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_output(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open output file '" + output_path + "'");
  }
  out << text;
}

}  // namespace ckmflag::cli
