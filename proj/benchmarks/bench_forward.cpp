#include <benchmark/benchmark.h>

#include "eit/forward.hpp"
#include "eit/phantom.hpp"

using namespace eit;

namespace {

FeFunction conductivity(const MeshPtr& mesh) {
  return interpolate([](Point p) { return standard_phantom()(p) + 1.0; }, mesh);
}

}  // namespace

static void BM_AssembleAndFactor(benchmark::State& state) {
  const MeshPtr mesh = build_mesh(static_cast<int>(state.range(0)));
  const FeFunction sigma = conductivity(mesh);
  const ElectrodeLayout layout = electrode_positions(32);
  for (auto _ : state) {
    ForwardSolver solver(mesh, layout, sigma);
    benchmark::DoNotOptimize(solver.stiffness().nonZeros());
  }
  state.SetComplexityN(mesh->node_count());
}
BENCHMARK(BM_AssembleAndFactor)->Arg(40)->Arg(80)->Arg(160)->Arg(320)->Unit(benchmark::kMillisecond);

static void BM_SimulateCauchy(benchmark::State& state) {
  const MeshPtr mesh = build_mesh(static_cast<int>(state.range(0)));
  const ForwardSolver solver(mesh, electrode_positions(32), conductivity(mesh));
  const CurrentPatterns pats = trig_patterns(32, 32);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_cauchy(solver, pats, 1e-4, 1).voltages.data());
}
BENCHMARK(BM_SimulateCauchy)->Arg(80)->Arg(320)->Unit(benchmark::kMillisecond);

static void BM_AssembleJacobian(benchmark::State& state) {
  const MeshPtr mesh = build_mesh(static_cast<int>(state.range(0)));
  const ForwardSolver solver(mesh, electrode_positions(32), conductivity(mesh));
  const CurrentPatterns pats = trig_patterns(32, 32);
  const ForwardResponse resp = forward_response(solver, pats, pats.active_columns(), Injection::continuum);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_jacobian(solver, resp).values.data());
}
BENCHMARK(BM_AssembleJacobian)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
