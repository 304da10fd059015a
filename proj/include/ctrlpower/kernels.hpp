#pragma once

// Data-parallel inner loops. Every kernel has a serial reference that the
// tests compare against; the OpenMP version writes each result into its own
// slot so the output does not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "ctrlpower/power_index.hpp"

namespace ctrlpower {
struct TimeSeries;
}

namespace ctrlpower::kernels {

/// Largest holder's index for each game (player 0), via spi_dp_player.
std::vector<double> top1_spi_serial(std::span<const WeightedVotingGame> games,
                                    std::int64_t grid = kDefaultGrid);
std::vector<double> top1_spi_parallel(std::span<const WeightedVotingGame> games,
                                      std::int64_t grid = kDefaultGrid, int threads = 0);

/// Fixed-period least-squares sse for each candidate period.
std::vector<double> period_scan_serial(const TimeSeries& series, std::span<const double> periods);
std::vector<double> period_scan_parallel(const TimeSeries& series, std::span<const double> periods,
                                         int threads = 0);

/// Number of threads OpenMP would use (1 when built without OpenMP).
int max_threads();

} // namespace ctrlpower::kernels
