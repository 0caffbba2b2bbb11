#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ckmflag/ckm.hpp"
#include "ckmflag/complex_matrix.hpp"
#include "ckmflag/fitting.hpp"
#include "ckmflag/flag.hpp"
#include "ckmflag/jarlskog_determinant.hpp"
#include "ckmflag/pdg.hpp"

// JSON document layer of the command-line tool. Complex numbers travel as
// two-element [re, im] arrays, matrices as row-major arrays of rows,
// coordinates as named fields ("x", "y", "z" for n = 3, "x1".."z1" for
// n = 4, "i,j" pair keys otherwise, 1-based). Parsing is strict: unknown
// keys are rejected with a message naming the field.
namespace ckmflag::cli {

using nlohmann::json;

/// Rejects any key of obj outside the given lists; context prefixes the
/// error message.
void check_keys(const json& obj, const std::vector<std::string>& required,
                const std::vector<std::string>& optional,
                const std::string& context);

double finite_number(const json& value, const std::string& context);
Complex complex_from_json(const json& value, const std::string& context);
json complex_to_json(Complex z);

ComplexMatrix matrix_from_json(const json& value, const std::string& context);
json matrix_to_json(const ComplexMatrix& m);
std::string matrix_to_csv(const ComplexMatrix& m);

FlagCoordinates coords_from_json(const json& doc, const std::string& context);
json coords_to_json(const FlagCoordinates& c);

MassSpectrum masses_from_json(const json& value, const std::string& context);

PdgAngles angles_from_json(const json& doc, const std::string& context);
json angles_to_json(const PdgAngles& a);

FitProblem fit_problem_from_json(const json& doc);
json fit_result_to_json(const FitProblem& problem, const FitResult& r);

Plaquette plaquette_from_json(const json& doc, const std::string& context);
json plaquette_to_json(const Plaquette& p);

/// Canonical serialization used for every emitted document: two-space
/// indent, sorted keys, trailing newline. Identical values give identical
/// bytes.
std::string dump_document(const json& doc);

json load_document(const std::string& path);
void write_output(const std::string& text, const std::string& output_path);

}  // namespace ckmflag::cli
