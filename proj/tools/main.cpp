#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ckmflag/errors.hpp"
#include "run.hpp"

namespace {

using ckmflag::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config,
                        std::vector<std::string>& tolerance_args) {
  cmd->add_option("--input", config.input_path, "Input JSON document");
  cmd->add_option("--output", config.output_path,
                  "Output file (default: stdout)");
  cmd->add_option("--seed", config.seed, "RNG seed for stochastic commands");
  cmd->add_option("--n", config.n,
                  "Dimension for commands that run without an input file")
      ->check(CLI::Range(2, 8));
  cmd->add_option("--tolerance", tolerance_args,
                  "Override a named tolerance, e.g. --tolerance unitarity=1e-6");
  cmd->add_flag("--csv", config.csv,
                "Emit the primary matrix as i,j,re,im CSV rows");
}

void parse_tolerances(const std::vector<std::string>& args, RunConfig& config) {
  for (const std::string& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
      throw ckmflag::ValidationError("tolerance override must look like name=value, got '" +
                                     arg + "'");
    }
    const std::string name = arg.substr(0, eq);
    try {
      config.tolerance_overrides[name] = std::stod(arg.substr(eq + 1));
    } catch (const std::exception&) {
      throw ckmflag::ValidationError("cannot parse tolerance value in '" + arg +
                                     "'");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Geometric coordinates for unitary mixing matrices: build unitaries "
      "from flag-manifold coordinates, extract coordinates back, assemble "
      "CKM matrices, evaluate CP invariants and commutator determinants, "
      "convert angle parametrizations, and fit coordinates to observables."};
  app.require_subcommand(1);

  RunConfig config;
  std::vector<std::string> tolerance_args;

  const std::vector<std::pair<std::string, RunConfig::Command>> commands = {
      {"build-unitary", RunConfig::Command::build_unitary},
      {"extract-coords", RunConfig::Command::extract_coords},
      {"ckm", RunConfig::Command::ckm},
      {"jarlskog", RunConfig::Command::jarlskog},
      {"det-commutator", RunConfig::Command::det_commutator},
      {"pdg-convert", RunConfig::Command::pdg_convert},
      {"fit", RunConfig::Command::fit},
      {"self-check", RunConfig::Command::self_check},
  };
  const std::vector<std::string> descriptions = {
      "Orthonormalize coordinates into a unitary matrix",
      "Recover coordinates from a unitary matrix",
      "Assemble the mixing matrix from a {left, right} coordinate pair",
      "Evaluate the plaquette CP invariant of a coordinate pair",
      "Commutator determinant of the mass matrices, with parity and the "
      "n = 3 invariant identity",
      "Convert between angle parametrization and coordinates",
      "Least-squares fit of coordinates to target observables",
      "Run the cross-module oracle suite and report pass counts",
  };

  for (std::size_t k = 0; k < commands.size(); ++k) {
    CLI::App* cmd = app.add_subcommand(commands[k].first, descriptions[k]);
    add_common_options(cmd, config, tolerance_args);
    const RunConfig::Command which = commands[k].second;
    cmd->callback([&config, which]() { config.command = which; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    parse_tolerances(tolerance_args, config);
    return ckmflag::cli::run(config);
  } catch (const ckmflag::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ckmflag::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
