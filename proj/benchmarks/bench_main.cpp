#include <benchmark/benchmark.h>

#include "spiralq/design_explorer.hpp"
#include "spiralq/em_model.hpp"
#include "spiralq/mechanics.hpp"

using namespace spiralq;

namespace {

const MaterialTable& materials() {
    static const MaterialTable t = MaterialTable::defaults();
    return t;
}

SpiralSpec device(int turns, bool xbeam) {
    auto s = SpiralSpec::reference_device(materials());
    s.turns = turns;
    if (xbeam) s.xbeam = XBeamSpec::laminate_default(materials());
    return s;
}

}  // namespace

static void BM_TotalInductance(benchmark::State& state) {
    const auto layout = generate_layout(device(static_cast<int>(state.range(0)), false));
    for (auto _ : state) benchmark::DoNotOptimize(total_inductance(layout));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TotalInductance)->RangeMultiplier(2)->Range(1, 16)->Complexity();

static void BM_QCurve(benchmark::State& state) {
    const auto spec = device(10, false);
    EmSettings em;
    em.freq_points = static_cast<int>(state.range(0));
    const auto pi = build_pi_model(spec, generate_layout(spec), em);
    const auto freqs = em.frequency_grid();
    for (auto _ : state) benchmark::DoNotOptimize(q_curve(pi_to_network(pi, freqs)).q_max);
}
BENCHMARK(BM_QCurve)->Arg(200)->Arg(2000);

static void BM_MaxImpactForce(benchmark::State& state) {
    const auto spec = device(10, state.range(0) != 0);
    const auto model = build_frame(generate_layout(spec), spec, static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(max_impact_force(model).force);
}
BENCHMARK(BM_MaxImpactForce)->ArgsProduct({{0, 1}, {4, 8}})->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state) {
    SweepGrid grid;
    grid.base = device(1, true);
    grid.axes = {{"turns", {"2", "4", "6", "8"}}, {"trace_width", {"8", "10", "12"}}};
    EvaluationSettings settings;
    settings.em.freq_points = 100;
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep(grid, {}, settings, materials(), static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
