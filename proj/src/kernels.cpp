#include "ctrlpower/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctrlpower/fitting.hpp"

namespace ctrlpower::kernels {

namespace {

int resolve_threads(int threads) { return threads > 0 ? threads : max_threads(); }

} // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::vector<double> top1_spi_serial(std::span<const WeightedVotingGame> games, std::int64_t grid) {
    std::vector<double> out(games.size());
    for (std::size_t i = 0; i < games.size(); ++i) out[i] = spi_dp_player(games[i], 0, grid);
    return out;
}

std::vector<double> top1_spi_parallel(std::span<const WeightedVotingGame> games, std::int64_t grid,
                                      int threads) {
    std::vector<double> out(games.size());
    const auto count = static_cast<std::ptrdiff_t>(games.size());
    [[maybe_unused]] const int nt = resolve_threads(threads);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            out[i] = spi_dp_player(games[i], 0, grid);
        } catch (...) {
#pragma omp critical(ctrlpower_top1_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<double> period_scan_serial(const TimeSeries& series, std::span<const double> periods) {
    std::vector<double> sse(periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) sse[i] = fit_at_period(series, periods[i]).sse;
    return sse;
}

std::vector<double> period_scan_parallel(const TimeSeries& series, std::span<const double> periods,
                                         int threads) {
    std::vector<double> sse(periods.size());
    const auto count = static_cast<std::ptrdiff_t>(periods.size());
    [[maybe_unused]] const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < count; ++i) sse[i] = fit_at_period(series, periods[i]).sse;
    return sse;
}

} // namespace ctrlpower::kernels
