#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctrlpower/dataset.hpp"
#include "ctrlpower/fitting.hpp"
#include "ctrlpower/power_index.hpp"

namespace ctrlpower {

/// Which holders take part in the meeting game.
enum class SpiMode {
    top9,  ///< first nine disclosed holders
    top10, ///< all disclosed holders
    top11, ///< all disclosed holders plus max(meeting_share - S_top10, 0)
};

std::string_view to_string(SpiMode m);
std::optional<SpiMode> parse_spi_mode(std::string_view s);

/// Builds the meeting game of one record. Throws DataError for top11 when
/// meeting_share is missing.
WeightedVotingGame meeting_game(const FirmYearRecord& record, SpiMode mode);

/// Aggregates for one group-year. Optional fields are absent when the inputs
/// needed for them are absent (no meeting data, fewer than two SPI < 1
/// firms, outcome-only data).
struct YearStats {
    int year = 0;
    std::size_t n_sample = 0;
    double r_spi_1 = 0.0; ///< under the configured SpiMode

    std::optional<double> m_top1, m_top1_sd;
    std::optional<double> m_top2_10, m_top2_10_sd;

    std::size_t n_meeting = 0; ///< records carrying meeting_share
    std::optional<double> meeting_ratio_mean, meeting_ratio_sd, band_count_ratio;
    std::optional<double> r_spi_1_top9, r_spi_1_top10, r_spi_1_top11;

    std::size_t n_spi_lt1 = 0;
    std::optional<double> spi_lt1_max, spi_lt1_min, spi_lt1_mean, spi_lt1_sd, spi_lt1_band;

    bool fitted = false; ///< year enters the Fourier fits

    friend bool operator==(const YearStats&, const YearStats&) = default;
};

struct StatsOptions {
    SpiMode mode = SpiMode::top10;
    std::int64_t grid = kDefaultGrid;
    bool parallel = true;
    int threads = 0;
};

/// Statistics of one group-year. Returns nullopt for an empty input; throws
/// std::invalid_argument if the records mix groups or years.
std::optional<YearStats> year_stats(const std::vector<FirmYearRecord>& records, const StatsOptions& options = {});

/// Statistics from top-1 SPI values alone (outcome-mode data).
std::optional<YearStats> year_stats_from_spi(int year, const std::vector<double>& spi);

/// A macro series for correlation: (year, value) pairs.
using MacroSeries = std::vector<std::pair<int, double>>;

/// Reads a `year,value` CSV. Throws DataError on malformed input.
MacroSeries read_macro_csv(const std::string& path);

struct PipelineConfig {
    StatsOptions stats;
    std::size_t min_sample = 50;
    FourierOptions fourier;
    double h = 1.5;
    std::map<std::string, MacroSeries> macro;
    /// Relative tolerance on the period-ratio diagnostic and absolute
    /// tolerance (radians) on the phase-difference diagnostic.
    double period_ratio_tolerance = 0.05;
    double phase_tolerance = 0.1;
};

struct SeriesFit {
    std::vector<int> years;
    std::vector<double> t;
    std::vector<double> observed;
    std::vector<double> fitted;
    FourierFit fit;
    std::optional<std::pair<double, double>> extrema; ///< (max, min), absent when degenerate
};

/// Checks of the two predicted relations between the fitted series.
struct Diagnostics {
    std::optional<double> period_ratio; ///< T(m_top2_10) / T(m_top1)
    double period_ratio_expected = 0.5;
    double period_ratio_tolerance = 0.05;
    std::optional<bool> period_ratio_ok;
    std::optional<double> phase_difference; ///< phase(m_top2_10) - phase(r_spi_1), in [0, 2π)
    double phase_expected = 0.0;
    double phase_tolerance = 0.1;
    std::optional<bool> phase_ok;
};

/// Phase angle φ of a1 cos θ + b1 sin θ = R cos(θ - φ).
double wave_phase(const WaveParams& p);
/// (phase(b) - phase(a)) wrapped to [0, 2π).
double phase_difference(const WaveParams& a, const WaveParams& b);

struct GroupReport {
    GroupKey group;
    std::vector<YearStats> years;
    std::optional<int> first_fit_year;
    std::optional<SeriesFit> r_spi_1, m_top1, m_top2_10;
    Diagnostics diagnostics;
};

struct CorrelationEntry {
    std::string macro;
    std::string target; ///< r_spi_1, m_top1 or m_top2_10 of the control group
    std::optional<CorrelationResult> result;
    std::string note;
};

struct Provenance {
    std::string source;       ///< "csv", "synth:default", "synth:outcomes"
    std::string input_digest; ///< FNV-1a 64 of the canonical input
    std::optional<std::uint64_t> seed;
    std::string version;
};

struct Report {
    std::vector<GroupReport> groups;
    std::vector<CorrelationEntry> correlations;
    Provenance provenance;
    PipelineConfig config;
    HypothesisWave hypothesis;
};

/// Filter, group, aggregate per year, fit and diagnose a registry.
/// Throws DataError when no group has a year at or above min_sample.
Report run_pipeline(std::vector<FirmYearRecord> records, const PipelineConfig& config, Provenance provenance);

/// Same over outcome-mode draws for one group; only r_spi_1 and the SPI < 1
/// statistics are available.
Report run_pipeline(const std::vector<YearDraws>& draws, GroupKey group, const PipelineConfig& config,
                    Provenance provenance);

/// FNV-1a 64-bit digest in hex.
std::string fnv1a_hex(std::string_view bytes);

std::string library_version();

} // namespace ctrlpower
