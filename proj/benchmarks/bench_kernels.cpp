#include <benchmark/benchmark.h>

#include "dispersia/integrators.hpp"
#include "dispersia/spectral.hpp"

using namespace dispersia;

namespace {

void BM_ToFrequency(benchmark::State& state) {
    const Grid g(16.0, static_cast<std::size_t>(state.range(0)));
    const auto f = sample_initial(GaussianInitial{}, g);
    for (auto _ : state) benchmark::DoNotOptimize(to_frequency(f));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ToFrequency)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_Phi1(benchmark::State& state) {
    double y = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi1(Complex(0.0, y)));
        y = y < 1e3 ? y * 1.1 : 1e-6;
    }
}
BENCHMARK(BM_Phi1);

void BM_Step(benchmark::State& state) {
    const auto scheme = static_cast<StepperKind>(state.range(0));
    const Grid g(16.0, static_cast<std::size_t>(state.range(1)));
    const auto model = DispersiveModel::monomial(2, 1.0, 1.0 / 64);
    const auto pre = precompute(model, GaussianPotential{}, g, 1e-2, scheme);
    auto mu = sample_initial(GaussianInitial{}, g);
    Stepper stepper(pre);
    for (auto _ : state) {
        stepper.advance(mu.values());
        benchmark::ClobberMemory();
    }
    state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_Step)->ArgsProduct({{0, 1, 2, 3}, {1 << 13, 1 << 16}});

void BM_Precompute(benchmark::State& state) {
    const auto scheme = static_cast<StepperKind>(state.range(0));
    const Grid g(16.0, 8192);
    const auto model = DispersiveModel::monomial(2, 1.0, 1.0 / 64);
    for (auto _ : state) benchmark::DoNotOptimize(precompute(model, GaussianPotential{}, g, 1e-2, scheme));
    state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_Precompute)->DenseRange(0, 3);

}  // namespace
BENCHMARK_MAIN();
