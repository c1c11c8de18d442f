#include <benchmark/benchmark.h>

#include "solvdyn/model.hpp"
#include "solvdyn/observables.hpp"
#include "solvdyn/pde.hpp"
#include "solvdyn/sde.hpp"

using namespace solvdyn;

namespace {

const Grid1D kGrid{};

void AssembleOperator(benchmark::State& state) {
    for (auto _ : state) {
        TridiagonalOperator op = assemble_operator(kGrid, {1.0, 1.0}, {1.0});
        benchmark::DoNotOptimize(op.diag.data());
    }
}
BENCHMARK(AssembleOperator);

void ThetaStep(benchmark::State& state) {
    const TridiagonalOperator op = assemble_operator(kGrid, {1.0, 1.0}, {1.0});
    const ThetaScheme scheme(op, 1e-3, 0.5);
    DensityField field = initial_density({1.0, 0.1}, kGrid);
    for (auto _ : state) {
        scheme.advance(field.values);
        benchmark::DoNotOptimize(field.values.data());
    }
    state.SetItemsProcessed(state.iterations() * kGrid.n);
}
BENCHMARK(ThetaStep);

void MomentQuadrature(benchmark::State& state) {
    const DensityField eq = stationary_density({1.0}, kGrid);
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(raw_moment(eq, order));
    }
}
BENCHMARK(MomentQuadrature)->Arg(1)->Arg(4);

void EnsembleStep(benchmark::State& state) {
    EnsembleConfig config;
    config.n_traj = state.range(0);
    config.dt_sde = 1e-3;
    config.t_end = 0.1;
    config.record_times = {0.0, 0.1};
    config.workers = 1;
    for (auto _ : state) {
        EnsembleResult r = simulate_ensemble({1.0, 1.0}, {1.0}, {1.0, 0.1}, config);
        benchmark::DoNotOptimize(r.moments.data());
    }
    state.SetItemsProcessed(state.iterations() * config.n_traj * 100);
}
BENCHMARK(EnsembleStep)->Arg(1024)->Arg(8192);

} // namespace

BENCHMARK_MAIN();
