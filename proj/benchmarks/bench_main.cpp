#include <benchmark/benchmark.h>

#include "vincl/certify.hpp"
#include "vincl/instances.hpp"
#include "vincl/resolvent.hpp"
#include "vincl/solver.hpp"

using namespace vincl;

namespace {

void BM_ResolventExact(benchmark::State& state) {
  const auto inst = example_4_7().instance;
  ResolventConfig cfg;
  cfg.rho = 0.35;
  const Resolvent R(inst, cfg);
  const Vector z{1.0, -2.0};
  for (auto _ : state) benchmark::DoNotOptimize(R(z));
}
BENCHMARK(BM_ResolventExact);

void BM_ResolventDamped(benchmark::State& state) {
  const auto inst = example_4_7().instance;
  ResolventConfig cfg;
  cfg.rho = 0.35;
  cfg.solver = ResolventSolver::damped_fixed_point;
  const Resolvent R(inst, cfg);
  const Vector z{1.0, -2.0};
  for (auto _ : state) benchmark::DoNotOptimize(R(z));
}
BENCHMARK(BM_ResolventDamped);

// Resolvent construction (SVD + LU) on the truncated sequence-space shape.
void BM_ResolventSetup(benchmark::State& state) {
  auto inst = example_3_3(static_cast<std::size_t>(state.range(0)), 1).instance;
  inst.A = SingleValuedMap::identity(inst.dim());
  ResolventConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(Resolvent(inst, cfg).condition_number());
}
BENCHMARK(BM_ResolventSetup)->Arg(8)->Arg(32)->Arg(128);

void BM_Solve47(benchmark::State& state) {
  const auto inst = example_4_7().instance;
  SolverConfig cfg;
  cfg.tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, cfg).summary.iterations);
}
BENCHMARK(BM_Solve47)->Unit(benchmark::kMicrosecond);

void BM_CertifyInstance(benchmark::State& state) {
  const auto inst = example_4_7().instance;
  SamplePlan plan;
  plan.pairs = static_cast<std::size_t>(state.range(0));
  const auto grid = default_rho_grid(inst);
  for (auto _ : state) benchmark::DoNotOptimize(certify_instance(inst, plan, grid).all_ok());
}
BENCHMARK(BM_CertifyInstance)->Arg(64)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_SampledLipschitz(benchmark::State& state) {
  const auto map = SingleValuedMap::from_function(
      4, [](const Vector& x) { return Vector{x[1], -x[0], 2.0 * x[3], x[2]}; });
  SamplePlan plan;
  plan.pairs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(certify_lipschitz(map, 2.0, plan).constant);
}
BENCHMARK(BM_SampledLipschitz)->Arg(512)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_Hausdorff(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PointSet a, b;
  for (std::size_t i = 0; i < n; ++i) {
    a.push_back(Vector{static_cast<double>(i), 0.5});
    b.push_back(Vector{0.25, static_cast<double>(i)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
