#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ctrlpower/fitting.hpp"
#include "ctrlpower/kernels.hpp"
#include "ctrlpower/random.hpp"

namespace {

using namespace ctrlpower;

std::vector<WeightedVotingGame> make_games(std::size_t n) {
    Rng rng(7);
    std::vector<WeightedVotingGame> games;
    games.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> w(10);
        double top = 0.05 + 0.4 * rng.uniform();
        double rest = (1.0 - top) * rng.uniform();
        w[0] = top;
        for (std::size_t k = 1; k < w.size(); ++k) w[k] = std::min(top, rest / 9.0);
        games.emplace_back(std::move(w));
    }
    return games;
}

TimeSeries make_series() {
    TimeSeries s;
    for (int i = 0; i < 30; ++i) {
        s.t.push_back(i);
        s.y.push_back(0.5 + 0.08 * std::cos(2.0 * M_PI * i / 17.0) + 0.01 * std::sin(i * 1.3));
    }
    return s;
}

std::vector<double> period_grid() {
    std::vector<double> p;
    for (double T = 4.0; T <= 60.0; T += 0.05) p.push_back(T);
    return p;
}

void BM_top1_spi_serial(benchmark::State& state) {
    const auto games = make_games(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::top1_spi_serial(games));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_top1_spi_parallel(benchmark::State& state) {
    const auto games = make_games(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::top1_spi_parallel(games));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_period_scan_serial(benchmark::State& state) {
    const auto s = make_series();
    const auto p = period_grid();
    for (auto _ : state) benchmark::DoNotOptimize(kernels::period_scan_serial(s, p));
}

void BM_period_scan_parallel(benchmark::State& state) {
    const auto s = make_series();
    const auto p = period_grid();
    for (auto _ : state) benchmark::DoNotOptimize(kernels::period_scan_parallel(s, p));
}

} // namespace

BENCHMARK(BM_top1_spi_serial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_top1_spi_parallel)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_period_scan_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_period_scan_parallel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
