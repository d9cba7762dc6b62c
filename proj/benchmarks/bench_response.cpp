#include <benchmark/benchmark.h>

#include <vector>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/params.hpp"
#include "cavity_eit/response.hpp"
#include "cavity_eit/steady_state.hpp"

using namespace cavity_eit;

namespace {

OperatingPoint pumped() {
    const ParameterSet p = default_parameters();
    return make_operating_point(p.system, p.drive);
}

void BM_ProbeResponse(benchmark::State& state) {
    const OperatingPoint op = pumped();
    double delta = op.system.mirror_freq;
    for (auto _ : state) {
        benchmark::DoNotOptimize(probe_response(delta, op));
        delta += 1e-3;
    }
}
BENCHMARK(BM_ProbeResponse);

void BM_Spectrum(benchmark::State& state) {
    const OperatingPoint op = pumped();
    std::vector<double> grid = uniform_grid(0.5, 1.5, static_cast<std::size_t>(state.range(0)));
    for (double& g : grid) g *= op.system.mirror_freq;
    const auto threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(grid, op, threads));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Spectrum)->UseRealTime()->Args({2001, 1})->Args({2001, 4})->Args({20001, 1})->Args({20001, 4})
    ->Unit(benchmark::kMicrosecond);

void BM_DelayAnalytic(benchmark::State& state) {
    const OperatingPoint op = pumped();
    for (auto _ : state) benchmark::DoNotOptimize(group_delay_analytic(op.system.mirror_freq, op));
}
BENCHMARK(BM_DelayAnalytic);

void BM_DelayFiniteDifference(benchmark::State& state) {
    const OperatingPoint op = pumped();
    for (auto _ : state) benchmark::DoNotOptimize(group_delay_fd(op.system.mirror_freq, op));
}
BENCHMARK(BM_DelayFiniteDifference);

void BM_PowerSweep(benchmark::State& state) {
    const ParameterSet p = default_parameters();
    std::vector<double> powers = uniform_grid(0.1, 5.0, static_cast<std::size_t>(state.range(0)));
    for (double& w : powers) w = units::uw_to_w(w);
    for (auto _ : state)
        benchmark::DoNotOptimize(power_sweep(powers, p.system.mirror_freq, p.system, p.drive));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PowerSweep)->Arg(20)->Arg(1000);

}  // namespace
