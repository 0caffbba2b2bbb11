#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace ckmflag::cli {

struct RunConfig {
  enum class Command {
    build_unitary,
    extract_coords,
    ckm,
    jarlskog,
    det_commutator,
    pdg_convert,
    fit,
    self_check,
  };

  Command command = Command::self_check;
  std::string input_path;   // empty: no input file
  std::string output_path;  // empty: stdout
  std::uint64_t seed = 0;
  std::size_t n = 3;        // dimension for commands that run without input
  bool csv = false;         // emit the primary matrix as i,j,re,im rows
  /// Known keys: "unitarity", "pivot", "fit_threshold", "consistency".
  std::map<std::string, double> tolerance_overrides;
};

/// Executes the subcommand and writes its document to the configured
/// output. Returns 0 on success and 2 on a soft numeric failure
/// (non-converged fit, failed self-check); throws ValidationError or
/// NumericError for hard failures.
int run(const RunConfig& config);

}  // namespace ckmflag::cli
