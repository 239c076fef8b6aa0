#include <benchmark/benchmark.h>

#include "nsbox/counterexample.hpp"
#include "nsbox/norms.hpp"
#include "nsbox/operators.hpp"
#include "nsbox/periodic_solver.hpp"
#include "nsbox/random_fields.hpp"
#include "nsbox/solver.hpp"

namespace {

using namespace nsbox;

SpectralField sample_velocity(const Grid& grid, std::uint64_t seed) {
  EnsembleSpec ens;
  return random_field(grid, grid.dim(), ens, seed);
}

void BM_TensorDiv2D(benchmark::State& state) {
  const Grid grid(2, static_cast<int>(state.range(0)), 2.0 * kPi);
  const SpectralField u = sample_velocity(grid, 1);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_tensor_div(u, u));
}
BENCHMARK(BM_TensorDiv2D)->Arg(64)->Arg(128)->Arg(256);

void BM_TensorDiv3D(benchmark::State& state) {
  const Grid grid(3, static_cast<int>(state.range(0)), 2.0 * kPi);
  const SpectralField u = sample_velocity(grid, 1);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_tensor_div(u, u));
}
BENCHMARK(BM_TensorDiv3D)->Arg(16)->Arg(32);

void BM_BesovNorm(benchmark::State& state) {
  const Grid grid(2, static_cast<int>(state.range(0)), 2.0 * kPi);
  const SpectralField u = sample_velocity(grid, 1);
  const DyadicPartition part = make_partition(grid);
  NormSpec spec;
  spec.sigma = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(besov_norm(u, spec, part));
}
BENCHMARK(BM_BesovNorm)->Arg(128)->Arg(256);

void BM_EtdStep(benchmark::State& state) {
  const Grid grid(2, static_cast<int>(state.range(0)), 2.0 * kPi);
  SpectralField u = sample_velocity(grid, 1);
  u *= 1e-2;
  const EtdStepper stepper(grid, 1e-2, Scheme::ETD2);
  const RhsFn rhs = [](const SpectralField& v, double) {
    return -1.0 * nonlinear_tensor_div(v, v);
  };
  for (auto _ : state) {
    u = stepper.advance(u, rhs, 0.0);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_EtdStep)->Arg(64)->Arg(128)->Arg(256);

void BM_PeriodicDuhamel(benchmark::State& state) {
  const Grid grid(2, 64, 2.0 * kPi);
  EnsembleSpec ens;
  const PeriodicForce f =
      random_periodic_force(grid, 1.0, static_cast<int>(state.range(0)), ens, 0.5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(periodic_duhamel(f));
}
BENCHMARK(BM_PeriodicDuhamel)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
