#include <benchmark/benchmark.h>

#include "cavity_eit/dynamics.hpp"
#include "cavity_eit/params.hpp"
#include "cavity_eit/steady_state.hpp"

using namespace cavity_eit;

namespace {

struct Setup {
    OperatingPoint op;
    SystemMatrix matrix;
    PulseSpec pulse;
    TimeSpan span;
    double dt;
};

Setup setup() {
    const ParameterSet p = default_parameters();
    OperatingPoint op = make_operating_point(p.system, p.drive);
    SystemMatrix m = build_matrix(op.system.mirror_freq, op);
    const PulseSpec pulse = default_pulse(op.system);
    const TimeSpan span = default_span(pulse, m);
    const double dt = suggest_time_step(m, pulse);
    return {op, m, pulse, span, dt};
}

void BM_BuildMatrix(benchmark::State& state) {
    const Setup s = setup();
    for (auto _ : state) benchmark::DoNotOptimize(build_matrix(s.op.system.mirror_freq, s.op));
}
BENCHMARK(BM_BuildMatrix);

void BM_IntegrateDefault(benchmark::State& state) {
    const Setup s = setup();
    const auto method = static_cast<Integrator>(state.range(0));
    state.SetLabel(std::string(to_string(method)));
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(s.matrix, s.pulse, s.span, s.dt, kDefaultSamples, method));
}
BENCHMARK(BM_IntegrateDefault)
    ->Arg(static_cast<int>(Integrator::rk4))
    ->Arg(static_cast<int>(Integrator::exponential))
    ->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
    const Setup s = setup();
    const Trajectory t = integrate(s.matrix, s.pulse, s.span, s.dt, kDefaultSamples);
    for (auto _ : state)
        benchmark::DoNotOptimize(reconstruct_displacement(t, s.op.steady, s.op.system.mirror_freq, 1.0));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMicrosecond);

}  // namespace
