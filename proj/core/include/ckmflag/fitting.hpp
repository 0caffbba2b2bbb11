#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ckmflag/flag.hpp"

namespace ckmflag {

/// Target rephasing-invariant observables of a mixing matrix: the full
/// grid of entry magnitudes and, for n = 3, optionally the CP invariant.
/// Residuals compare squared magnitudes, which keeps them smooth.
struct FitProblem {
  std::size_t n = 3;
  /// Row-major n x n grid of |V_ij| targets, each in [0, 1].
  std::vector<double> target_magnitudes;
  /// CP-invariant target; n = 3 only.
  std::optional<double> target_j;
  /// Per-residual weights: n x n grid for the magnitudes (empty means all
  /// ones) plus one weight for the invariant term.
  std::vector<double> magnitude_weights;
  double j_weight = 1.0;
  /// Maximum coordinate modulus the solver may visit.
  double coordinate_bound = 10.0;
  /// Allowed deviation of squared-magnitude row/column sums from 1 before
  /// the problem counts as inconsistent.
  double consistency_tolerance = 1e-6;
  /// Residual norm below which a fit reports converged.
  double convergence_threshold = 1e-8;

  void validate() const;
  /// Largest deviation of any row or column sum of squared target
  /// magnitudes from 1.
  double unitarity_defect() const;
  bool is_consistent() const;
};

struct FitResult {
  FlagCoordinates left;
  FlagCoordinates right;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> per_residual;
};

struct FitOptions {
  std::size_t starts = 8;
  std::size_t max_iterations = 500;
  double initial_damping = 1e-3;
  bool parallel = true;
};

/// Weighted residual vector at the given coordinates: the n² squared
/// magnitude differences in row-major order, then the invariant term when
/// the problem has one. Deterministic: identical inputs give bitwise
/// identical output.
std::vector<double> residuals(const FitProblem& problem,
                              const FlagCoordinates& left,
                              const FlagCoordinates& right);

/// Forward-difference Jacobian of residuals with respect to the packed
/// real parameters (left coordinates then right, each split re/im), step
/// 1e-7 * max(1, |parameter|). Row-major, one row per residual.
struct Jacobian {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};
Jacobian residual_jacobian(const FitProblem& problem,
                           const FlagCoordinates& left,
                           const FlagCoordinates& right);

/// Damped Gauss-Newton least squares over both coordinate sets with
/// multi-start: each start draws its initial coordinates from the unit
/// disc with an RNG seeded by (seed, start index), runs independently
/// (concurrently when options.parallel), and the best residual wins with
/// ties broken toward the lowest start index. Never throws on
/// non-convergence; the returned result carries converged = false.
FitResult fit(const FitProblem& problem, std::uint64_t seed,
              const FitOptions& options = {});

}  // namespace ckmflag
