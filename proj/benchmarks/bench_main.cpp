#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "vsim/microgrid.hpp"
#include "vsim/regularization.hpp"
#include "vsim/synth.hpp"
#include "vsim/vie.hpp"

using namespace vsim;

namespace {

SampledSeries ramp_rhs(std::size_t cells) {
    const double h = 1.0 / static_cast<double>(cells);
    SampledSeries f = SampledSeries::zeros(Grid{0.0, h, cells + 1});
    for (std::size_t k = 0; k <= cells; ++k) f.values[k] = f.grid.node(k);
    return f;
}

void BM_ForwardApply(benchmark::State& state) {
    const auto kernel =
        PiecewiseKernel::single([](double t, double tau) { return std::exp(t - tau); });
    const auto cells = static_cast<std::size_t>(state.range(0));
    SampledSeries x = SampledSeries::zeros(Grid{0.0, 1.0 / static_cast<double>(cells), cells});
    for (std::size_t j = 0; j < x.size(); ++j) x.values[j] = std::sin(x.grid.midpoint(j));
    for (auto _ : state) {
        auto f = forward_apply(kernel, x);
        benchmark::DoNotOptimize(f);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForwardApply)->RangeMultiplier(2)->Range(128, 4096)->Complexity();

void BM_SolveFirstKind(benchmark::State& state) {
    const auto kernel =
        PiecewiseKernel::single([](double t, double tau) { return 1.0 + 0.2 * std::sin(t + tau); });
    const auto f = ramp_rhs(state.range(0));
    for (auto _ : state) {
        auto sol = solve_vie_first_kind(kernel, f);
        benchmark::DoNotOptimize(sol);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveFirstKind)->RangeMultiplier(2)->Range(128, 4096)->Complexity();

void BM_SolveLavrentiev(benchmark::State& state) {
    const auto kernel = PiecewiseKernel::constant(1.0);
    auto f = inject_noise(ramp_rhs(state.range(0)), 0.01, 7);
    f.values[0] = 0.0;
    for (auto _ : state) {
        auto sol = solve_vie_lavrentiev(kernel, f, 5e-3);
        benchmark::DoNotOptimize(sol);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveLavrentiev)->RangeMultiplier(2)->Range(128, 4096)->Complexity();

void BM_SelectAlphaDiscrepancy(benchmark::State& state) {
    const auto kernel = PiecewiseKernel::constant(1.0);
    auto f = inject_noise(ramp_rhs(512), 0.01, 11);
    f.values[0] = 0.0;
    for (auto _ : state) {
        double alpha = select_alpha_discrepancy(kernel, f, 3e-3);
        benchmark::DoNotOptimize(alpha);
    }
}
BENCHMARK(BM_SelectAlphaDiscrepancy);

void BM_SimulateYear(benchmark::State& state) {
    MicrogridConfig cfg;
    cfg.battery.capacity_kwh = 384.0;
    cfg.battery.v_max_kw = 72.0;
    cfg.model_kind = state.range(0) ? ModelKind::volterra : ModelKind::linear;

    SynthProfileParams pvp;
    pvp.seed = 1;
    pvp.noise_frac = 0.1;
    SynthProfileParams ldp;
    ldp.daily_peak_kw = 42.0;
    ldp.seed = 2;
    ldp.noise_frac = 0.1;
    const auto pv = synth_pv_profile(pvp);
    const auto load = synth_load_profile(ldp);
    for (auto _ : state) {
        auto res = simulate(cfg, pv, load);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_SimulateYear)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SynthProfiles(benchmark::State& state) {
    SynthProfileParams p;
    p.noise_frac = 0.2;
    p.seed = 3;
    for (auto _ : state) {
        auto pv = synth_pv_profile(p);
        auto load = synth_load_profile(p);
        benchmark::DoNotOptimize(pv);
        benchmark::DoNotOptimize(load);
    }
}
BENCHMARK(BM_SynthProfiles);

} // namespace

BENCHMARK_MAIN();
