#include "rfde/stochastic_convolution.hpp"

#include <benchmark/benchmark.h>

namespace {

rfde::SpectralModel default_model(int modes) {
    return rfde::SpectralModel::heat(modes, 0.5, 0.5, 0.25, 0.5, 1.0,
                                     rfde::DelayKernel::constant(1.0));
}

void BM_solve_mode(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto model = default_model(1);
    const rfde::StepGrid grid(1.0, m, 3);
    for (auto _ : state) {
        auto mf = rfde::solve_mode(64.0, model, grid);
        benchmark::DoNotOptimize(mf.values.data());
    }
    state.SetComplexityN(m);
}
BENCHMARK(BM_solve_mode)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

void BM_solve_all(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    const auto model = default_model(modes);
    const rfde::StepGrid grid(1.0, 256, 3);
    for (auto _ : state) {
        auto fsol = rfde::solve_all(model, grid, 4);
        benchmark::DoNotOptimize(fsol.modes.data());
    }
}
BENCHMARK(BM_solve_all)->Arg(16)->Arg(64);

void BM_second_moment(benchmark::State& state) {
    const auto fsol = rfde::solve_all(default_model(64), rfde::StepGrid(1.0, 256, 2), 4);
    const auto noise = rfde::NoiseModel::power(64, 2.0, 0.6, 1.0);
    for (auto _ : state) {
        double v = rfde::second_moment(fsol, noise, 0.5, 128, 384);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_second_moment);

void BM_simulate_paths(benchmark::State& state) {
    const auto fsol = rfde::solve_all(default_model(32), rfde::StepGrid(1.0, 128, 2), 4);
    const auto noise = rfde::NoiseModel::power(32, 2.0, 0.6, 1.0);
    const int paths = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto ens = rfde::simulate_paths(fsol, noise, 1, paths, 4);
        benchmark::DoNotOptimize(ens.values.data());
    }
}
BENCHMARK(BM_simulate_paths)->Arg(8)->Arg(32);

} // namespace

BENCHMARK_MAIN();
