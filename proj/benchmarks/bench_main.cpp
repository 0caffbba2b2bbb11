#include <benchmark/benchmark.h>

#include <random>

#include "ckmflag/ckm.hpp"
#include "ckmflag/fitting.hpp"
#include "ckmflag/flag.hpp"
#include "ckmflag/jarlskog_determinant.hpp"
#include "ckmflag/sampling.hpp"

namespace {

using namespace ckmflag;

FlagCoordinates fixed_coordinates(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_coordinates(rng, n, 1.0);
}

void BM_GramSchmidtUnitary(benchmark::State& state) {
  const FlagCoordinates c = fixed_coordinates(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_schmidt_unitary(c));
  }
}
BENCHMARK(BM_GramSchmidtUnitary)->Arg(3)->Arg(4)->Arg(6);

void BM_ClosedFormUnitaryN3(benchmark::State& state) {
  const FlagCoordinates c = fixed_coordinates(3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_form_unitary_n3(c));
  }
}
BENCHMARK(BM_ClosedFormUnitaryN3);

void BM_ClosedFormUnitaryN4(benchmark::State& state) {
  const FlagCoordinates c = fixed_coordinates(4, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_form_unitary_n4(c));
  }
}
BENCHMARK(BM_ClosedFormUnitaryN4);

void BM_BuildCkm(benchmark::State& state) {
  const FlagCoordinates left = fixed_coordinates(state.range(0), 4);
  const FlagCoordinates right = fixed_coordinates(state.range(0), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_ckm(left, right));
  }
}
BENCHMARK(BM_BuildCkm)->Arg(3)->Arg(4);

void BM_CoordsFromUnitary(benchmark::State& state) {
  const ComplexMatrix w =
      gram_schmidt_unitary(fixed_coordinates(state.range(0), 6));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coords_from_unitary(w));
  }
}
BENCHMARK(BM_CoordsFromUnitary)->Arg(3)->Arg(6);

void BM_JarlskogFromCoords(benchmark::State& state) {
  const FlagCoordinates left = fixed_coordinates(3, 7);
  const FlagCoordinates right = fixed_coordinates(3, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jarlskog_from_coords(left, right));
  }
}
BENCHMARK(BM_JarlskogFromCoords);

void BM_CommutatorDet(benchmark::State& state) {
  std::mt19937_64 rng(9);
  const MassSpectrum s({1.0, 2.0, 3.0});
  const MassSpectrum s_prime({0.5, 1.5, 4.5});
  const ComplexMatrix m = build_mass_matrix(
      gram_schmidt_unitary(random_coordinates(rng, 3, 1.0)), s);
  const ComplexMatrix m_prime = build_mass_matrix(
      gram_schmidt_unitary(random_coordinates(rng, 3, 1.0)), s_prime);
  for (auto _ : state) {
    benchmark::DoNotOptimize(commutator_det(m, m_prime));
  }
}
BENCHMARK(BM_CommutatorDet);

void BM_FitResiduals(benchmark::State& state) {
  std::mt19937_64 rng(10);
  const FlagCoordinates left = random_coordinates(rng, 3, 1.0);
  const FlagCoordinates right = random_coordinates(rng, 3, 1.0);
  const CkmResult truth = build_ckm(left, right);
  FitProblem problem;
  problem.n = 3;
  problem.target_magnitudes.resize(9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      problem.target_magnitudes[i * 3 + j] = std::abs(truth.v(i, j));
  problem.target_j = jarlskog_invariant(truth.v, Plaquette::corners());
  for (auto _ : state) {
    benchmark::DoNotOptimize(residuals(problem, left, right));
  }
}
BENCHMARK(BM_FitResiduals);

void BM_FitSingleStart(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const FlagCoordinates left = random_coordinates(rng, 3, 1.0);
  const FlagCoordinates right = random_coordinates(rng, 3, 1.0);
  const CkmResult truth = build_ckm(left, right);
  FitProblem problem;
  problem.n = 3;
  problem.target_magnitudes.resize(9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      problem.target_magnitudes[i * 3 + j] = std::abs(truth.v(i, j));
  problem.target_j = jarlskog_invariant(truth.v, Plaquette::corners());
  FitOptions options;
  options.starts = 1;
  options.parallel = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(problem, 12, options));
  }
}
BENCHMARK(BM_FitSingleStart);

}  // namespace

BENCHMARK_MAIN();
