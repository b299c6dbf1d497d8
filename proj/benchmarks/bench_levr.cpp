#include <benchmark/benchmark.h>

#include "eit/calderon.hpp"
#include "eit/forward.hpp"
#include "eit/levr.hpp"
#include "eit/phantom.hpp"
#include "eit/support.hpp"

using namespace eit;

namespace {

const CauchyData& data() {
  static const CauchyData d = [] {
    const MeshPtr mesh = build_mesh(160);
    const ForwardSolver solver(mesh, electrode_positions(32),
                               interpolate([](Point p) { return standard_phantom()(p) + 1.0; }, mesh));
    return simulate_cauchy(solver, trig_patterns(32, 32), 1e-4, 1);
  }();
  return d;
}

}  // namespace

static void BM_CalderonImage(benchmark::State& state) {
  const PixelGrid grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(calderon_image(data(), 1.4, grid).values.data());
}
BENCHMARK(BM_CalderonImage)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_NormalSolve(benchmark::State& state) {
  const int n = 80;
  const MeshPtr mesh = build_mesh(n);
  const PixelGrid grid(n);
  const ForwardSolver solver(mesh, electrode_positions(32), interpolate([](Point) { return 1.0; }, mesh));
  const Jacobian j = assemble_jacobian(solver, trig_patterns(32, 32));
  const FeFunction mask = pixels_to_fe(oracle_support(standard_phantom(), grid).values, grid, mesh);
  const Regularizer reg(*mesh, mask.values, 1e-3);
  const NormalEquations ne(reg.hessian(), state.range(0) == 0 ? NormalSolver::direct : NormalSolver::conjugate_gradient);
  const Eigen::VectorXd r = Eigen::VectorXd::Ones(j.values.rows());
  for (auto _ : state) benchmark::DoNotOptimize(ne.solve(j.values, r).data());
}
BENCHMARK(BM_NormalSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_LevrRun(benchmark::State& state) {
  ReconConfig config;
  config.iterations = static_cast<int>(state.range(0));
  const SupportMask mask = oracle_support(standard_phantom(), PixelGrid(config.mesh_n));
  for (auto _ : state) benchmark::DoNotOptimize(run_levr(data(), config, mask).iterates.size());
}
BENCHMARK(BM_LevrRun)->Arg(2)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
