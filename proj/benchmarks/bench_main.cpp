#include <benchmark/benchmark.h>

#include "gfnoma/analysis.hpp"
#include "gfnoma/aud.hpp"
#include "gfnoma/network.hpp"
#include "gfnoma/phy.hpp"
#include "gfnoma/rng.hpp"
#include "gfnoma/specfun.hpp"

namespace {

gfnoma::NetworkConfig reference_cfg() {
    gfnoma::NetworkConfig cfg;
    cfg.c2 = 4.98;
    cfg.c3 = 20.0281760347;
    return cfg;
}

void BM_upper_inc_gamma(benchmark::State& state) {
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gfnoma::specfun::upper_inc_gamma(0.5, x));
        x = x < 8.0 ? x + 0.1 : 0.3;
    }
}
BENCHMARK(BM_upper_inc_gamma);

void BM_p_per(benchmark::State& state) {
    const gfnoma::NetworkConfig cfg = reference_cfg();
    for (auto _ : state) benchmark::DoNotOptimize(gfnoma::p_per(cfg));
}
BENCHMARK(BM_p_per);

void BM_avg_nmse(benchmark::State& state) {
    const gfnoma::NetworkConfig cfg = reference_cfg();
    for (auto _ : state) benchmark::DoNotOptimize(gfnoma::avg_nmse(cfg));
}
BENCHMARK(BM_avg_nmse);

void BM_avg_rate(benchmark::State& state) {
    const gfnoma::NetworkConfig cfg = reference_cfg();
    for (auto _ : state) benchmark::DoNotOptimize(gfnoma::avg_rate(cfg));
}
BENCHMARK(BM_avg_rate);

void BM_ta_omp_trial(benchmark::State& state) {
    const gfnoma::NetworkConfig cfg = reference_cfg();
    const double ups = gfnoma::amp_threshold(cfg);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        gfnoma::RngStream rng(99, 0, trial++);
        const auto real = gfnoma::sample_realization(cfg, rng);
        const auto phi =
            gfnoma::gen_gaussian_preambles(cfg.preamble_len, cfg.n_devices, rng);
        const auto rx = gfnoma::synth_preamble_rx(real, phi, cfg, rng);
        auto ws = gfnoma::make_aud_workspace(phi.cols, rx.y0);
        benchmark::DoNotOptimize(gfnoma::ta_omp(ws, ups, cfg.noise_w));
    }
}
BENCHMARK(BM_ta_omp_trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
