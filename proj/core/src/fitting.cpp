#include "ckmflag/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "ckmflag/ckm.hpp"

namespace ckmflag {

namespace {

std::size_t coordinate_count(std::size_t n) { return n * (n - 1) / 2; }

std::vector<double> pack(const FlagCoordinates& left,
                         const FlagCoordinates& right) {
  std::vector<double> p;
  p.reserve(2 * (left.count() + right.count()));
  for (const Complex& z : left.values()) {
    p.push_back(z.real());
    p.push_back(z.imag());
  }
  for (const Complex& z : right.values()) {
    p.push_back(z.real());
    p.push_back(z.imag());
  }
  return p;
}

std::pair<FlagCoordinates, FlagCoordinates> unpack(
    std::size_t n, const std::vector<double>& p) {
  const std::size_t m = coordinate_count(n);
  std::vector<Complex> left(m), right(m);
  for (std::size_t k = 0; k < m; ++k)
    left[k] = Complex(p[2 * k], p[2 * k + 1]);
  for (std::size_t k = 0; k < m; ++k)
    right[k] = Complex(p[2 * (m + k)], p[2 * (m + k) + 1]);
  return {FlagCoordinates(n, std::move(left)),
          FlagCoordinates(n, std::move(right))};
}

void clamp_to_bound(std::vector<double>& p, double bound) {
  for (std::size_t k = 0; k + 1 < p.size(); k += 2) {
    const double modulus = std::hypot(p[k], p[k + 1]);
    if (modulus > bound) {
      const double scale = bound / modulus;
      p[k] *= scale;
      p[k + 1] *= scale;
    }
  }
}

std::vector<double> residuals_packed(const FitProblem& problem,
                                     const std::vector<double>& p) {
  auto [left, right] = unpack(problem.n, p);
  return residuals(problem, left, right);
}

double cost_of(const std::vector<double>& r) {
  double c = 0.0;
  for (double v : r) c += v * v;
  return c;
}

// Solves (h + damping I) x = -g for symmetric positive definite h by
// Cholesky. Returns false when a pivot is not positive.
bool solve_damped(std::vector<double> h, std::vector<double> g, double damping,
                  std::size_t n, std::vector<double>& x) {
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] += damping;
  std::vector<double> chol(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = h[i * n + j];
      for (std::size_t k = 0; k < j; ++k)
        sum -= chol[i * n + k] * chol[j * n + k];
      if (i == j) {
        if (sum <= 0.0) return false;
        chol[i * n + i] = std::sqrt(sum);
      } else {
        chol[i * n + j] = sum / chol[j * n + j];
      }
    }
  }
  // Forward then backward substitution on -g.
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = -g[i];
    for (std::size_t k = 0; k < i; ++k) sum -= chol[i * n + k] * y[k];
    y[i] = sum / chol[i * n + i];
  }
  x.assign(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= chol[k * n + ii] * x[k];
    x[ii] = sum / chol[ii * n + ii];
  }
  return true;
}

Jacobian jacobian_packed(const FitProblem& problem,
                         const std::vector<double>& p,
                         const std::vector<double>& base) {
  Jacobian jac;
  jac.rows = base.size();
  jac.cols = p.size();
  jac.values.assign(jac.rows * jac.cols, 0.0);
  std::vector<double> bumped = p;
  for (std::size_t c = 0; c < jac.cols; ++c) {
    const double step = 1e-7 * std::max(1.0, std::abs(p[c]));
    bumped[c] = p[c] + step;
    const std::vector<double> shifted = residuals_packed(problem, bumped);
    bumped[c] = p[c];
    for (std::size_t r = 0; r < jac.rows; ++r)
      jac.values[r * jac.cols + c] = (shifted[r] - base[r]) / step;
  }
  return jac;
}

struct StartOutcome {
  std::vector<double> params;
  std::vector<double> residual;
  double cost = 0.0;
  std::size_t iterations = 0;
};

StartOutcome run_start(const FitProblem& problem, std::uint64_t seed,
                       std::size_t start_index, const FitOptions& options) {
  const std::size_t n_params = 4 * coordinate_count(problem.n);
  std::seed_seq sequence{static_cast<std::uint32_t>(seed & 0xffffffffu),
                         static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(start_index)};
  std::mt19937_64 rng(sequence);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  StartOutcome out;
  out.params.resize(n_params);
  for (std::size_t k = 0; k + 1 < n_params; k += 2) {
    const double radius = std::sqrt(unit(rng));
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    out.params[k] = radius * std::cos(phase);
    out.params[k + 1] = radius * std::sin(phase);
  }

  out.residual = residuals_packed(problem, out.params);
  out.cost = cost_of(out.residual);
  double damping = options.initial_damping;

  while (out.iterations < options.max_iterations) {
    ++out.iterations;
    const Jacobian jac =
        jacobian_packed(problem, out.params, out.residual);
    // Normal equations.
    std::vector<double> h(n_params * n_params, 0.0);
    std::vector<double> g(n_params, 0.0);
    for (std::size_t r = 0; r < jac.rows; ++r) {
      const double* row = &jac.values[r * jac.cols];
      for (std::size_t i = 0; i < n_params; ++i) {
        g[i] += row[i] * out.residual[r];
        for (std::size_t j = 0; j <= i; ++j) h[i * n_params + j] += row[i] * row[j];
      }
    }
    for (std::size_t i = 0; i < n_params; ++i)
      for (std::size_t j = i + 1; j < n_params; ++j)
        h[i * n_params + j] = h[j * n_params + i];

    bool stepped = false;
    while (damping < 1e14) {
      std::vector<double> delta;
      if (solve_damped(h, g, damping, n_params, delta)) {
        std::vector<double> trial = out.params;
        for (std::size_t i = 0; i < n_params; ++i) trial[i] += delta[i];
        clamp_to_bound(trial, problem.coordinate_bound);
        const std::vector<double> trial_residual =
            residuals_packed(problem, trial);
        const double trial_cost = cost_of(trial_residual);
        if (trial_cost < out.cost) {
          const double improvement = out.cost - trial_cost;
          out.params = std::move(trial);
          out.residual = trial_residual;
          out.cost = trial_cost;
          damping = std::max(damping * 0.1, 1e-15);
          stepped = true;
          if (out.cost < 1e-30 ||
              improvement < 1e-15 * std::max(out.cost, 1e-30)) {
            return out;  // at the numeric floor
          }
          break;
        }
      }
      damping *= 10.0;
    }
    if (!stepped) break;  // damping exhausted
  }
  return out;
}

}  // namespace

void FitProblem::validate() const {
  if (n != 3 && n != 4) {
    throw ValidationError("fit problems support n = 3 or n = 4, got n = " +
                          std::to_string(n));
  }
  if (target_magnitudes.size() != n * n) {
    throw ValidationError("expected " + std::to_string(n * n) +
                          " target magnitudes, got " +
                          std::to_string(target_magnitudes.size()));
  }
  for (double m : target_magnitudes) {
    if (!std::isfinite(m) || m < 0.0 || m > 1.0) {
      throw ValidationError("target magnitudes must lie in [0, 1]");
    }
  }
  if (target_j && n != 3) {
    throw ValidationError("an invariant target is defined for n = 3 only");
  }
  if (target_j && !std::isfinite(*target_j)) {
    throw ValidationError("invariant target must be finite");
  }
  if (!magnitude_weights.empty() && magnitude_weights.size() != n * n) {
    throw ValidationError("weights must match the magnitude grid");
  }
  for (double w : magnitude_weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw ValidationError("weights must be positive");
    }
  }
  if (!std::isfinite(j_weight) || j_weight <= 0.0) {
    throw ValidationError("invariant weight must be positive");
  }
  if (!std::isfinite(coordinate_bound) || coordinate_bound <= 0.0) {
    throw ValidationError("coordinate bound must be positive");
  }
}

double FitProblem::unitarity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += target_magnitudes[i * n + j] * target_magnitudes[i * n + j];
      col += target_magnitudes[j * n + i] * target_magnitudes[j * n + i];
    }
    worst = std::max({worst, std::abs(row - 1.0), std::abs(col - 1.0)});
  }
  return worst;
}

bool FitProblem::is_consistent() const {
  return unitarity_defect() <= consistency_tolerance;
}

std::vector<double> residuals(const FitProblem& problem,
                              const FlagCoordinates& left,
                              const FlagCoordinates& right) {
  problem.validate();
  if (left.dim() != problem.n || right.dim() != problem.n) {
    throw ShapeError("coordinate dimensions do not match the fit problem");
  }
  const ComplexMatrix v = matmul(adjoint(gram_schmidt_unitary(left)),
                                 gram_schmidt_unitary(right));
  const std::size_t n = problem.n;
  std::vector<double> r;
  r.reserve(n * n + (problem.target_j ? 1 : 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double weight = problem.magnitude_weights.empty()
                                ? 1.0
                                : problem.magnitude_weights[i * n + j];
      const double target = problem.target_magnitudes[i * n + j];
      r.push_back(weight * (std::norm(v(i, j)) - target * target));
    }
  }
  if (problem.target_j) {
    const double j = jarlskog_invariant(v, Plaquette::corners());
    r.push_back(problem.j_weight * (j - *problem.target_j));
  }
  return r;
}

Jacobian residual_jacobian(const FitProblem& problem,
                           const FlagCoordinates& left,
                           const FlagCoordinates& right) {
  const std::vector<double> p = pack(left, right);
  return jacobian_packed(problem, p, residuals_packed(problem, p));
}

FitResult fit(const FitProblem& problem, std::uint64_t seed,
              const FitOptions& options) {
  problem.validate();
  const std::size_t starts = std::max<std::size_t>(options.starts, 1);

  std::vector<StartOutcome> outcomes(starts);
  if (options.parallel) {
    std::vector<std::future<StartOutcome>> futures;
    futures.reserve(starts);
    for (std::size_t k = 0; k < starts; ++k) {
      futures.push_back(std::async(std::launch::async, run_start, problem,
                                   seed, k, options));
    }
    for (std::size_t k = 0; k < starts; ++k) outcomes[k] = futures[k].get();
  } else {
    for (std::size_t k = 0; k < starts; ++k)
      outcomes[k] = run_start(problem, seed, k, options);
  }

  // Deterministic merge: best cost, ties to the lowest start index.
  std::size_t best = 0;
  for (std::size_t k = 1; k < starts; ++k) {
    if (outcomes[k].cost < outcomes[best].cost) best = k;
  }

  const StartOutcome& winner = outcomes[best];
  auto [left, right] = unpack(problem.n, winner.params);
  FitResult result{std::move(left), std::move(right),
                   std::sqrt(winner.cost), winner.iterations, false,
                   winner.residual};
  result.converged = result.residual_norm < problem.convergence_threshold;
  return result;
}

}  // namespace ckmflag
