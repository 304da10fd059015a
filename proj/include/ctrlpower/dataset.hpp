#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctrlpower/evolution.hpp"

namespace ctrlpower {

enum class Board { main, sme_gem };
enum class Ownership { priv, state };

std::string_view to_string(Board b);
std::string_view to_string(Ownership o);
std::optional<Board> parse_board(std::string_view s);
std::optional<Ownership> parse_ownership(std::string_view s);

/// One of the four (board, ownership) cells.
struct GroupKey {
    Board board = Board::main;
    Ownership ownership = Ownership::priv;

    auto operator<=>(const GroupKey&) const = default;
    /// "private_main", "state_sme_gem", ...
    std::string name() const;
};

/// The four cells in canonical order, control group first.
const std::array<GroupKey, 4>& all_groups();

inline constexpr std::size_t kMaxHolders = 10;
/// Tolerance on Σ shares <= 1.
inline constexpr double kShareSumTolerance = 1e-9;
/// Ordering breaches up to this size are repaired by sorting.
inline constexpr double kOrderTolerance = 1e-6;

/// One firm-year registry row: the disclosed top holders' fractions of
/// total equity in descending order, plus optional meeting attendance.
struct FirmYearRecord {
    std::string firm_id;
    int year = 0;
    Board board = Board::main;
    Ownership ownership = Ownership::priv;
    std::vector<double> shares;
    std::optional<double> meeting_share;
    std::optional<int> n_meetings;

    GroupKey group() const { return {board, ownership}; }
    double top1() const { return shares.front(); }
    /// Sum of holders 2..10.
    double top2_10() const;
    double top10() const;

    friend bool operator==(const FirmYearRecord&, const FirmYearRecord&) = default;
};

/// Throws DataError if the record breaks an invariant.
void validate(const FirmYearRecord& record);

struct IngestResult {
    std::vector<FirmYearRecord> records;
    /// "row N: reason" for each rejected row (N counts the header as row 1).
    std::vector<std::string> diagnostics;
};

/// Column order of the registry CSV.
inline constexpr std::array<std::string_view, 16> kRegistryColumns = {
    "firm_id", "year", "board", "ownership", "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9", "s10",
    "meeting_share", "n_meetings"};

/// Reads a registry CSV. Rows that fail parsing or validation are skipped
/// and reported; a missing column throws DataError.
IngestResult ingest_csv(std::istream& in);
IngestResult ingest_csv_file(const std::string& path);

/// Writes records in the registry schema with round-trip exact numbers.
void emit_csv(std::ostream& out, const std::vector<FirmYearRecord>& records);

/// Keeps records whose largest holder owns less than half the equity.
std::vector<FirmYearRecord> apply_sample_filter(const std::vector<FirmYearRecord>& records);

/// Partition into the four cells; every cell is present, possibly empty.
std::map<GroupKey, std::vector<FirmYearRecord>> group_records(const std::vector<FirmYearRecord>& records);

/// Sort by (group, year, firm_id, shares) so downstream results do not
/// depend on input row order.
void canonical_sort(std::vector<FirmYearRecord>& records);

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

/// Per-year generator targets for one group.
struct YearTarget {
    int year = 0;
    int firms = 0;
    Moments top1;
    Moments top2_10;
};

struct GroupTargets {
    GroupKey group;
    std::vector<YearTarget> years;
};

struct SynthConfig {
    std::vector<GroupTargets> groups;
    /// Clip range for drawn top-1 shares.
    double top1_min = 0.02;
    double top1_max = 0.75;
    /// Concentration of the symmetric Dirichlet split of the top-2..10
    /// total; unset means an equal split.
    std::optional<double> split_alpha;
    /// When set, meeting_share = ratio * S_top10 with ratio drawn from these
    /// moments and clipped to [0, 1 / S_top10].
    std::optional<Moments> meeting_ratio;
    /// Outcome mode: atom wave and normal branch for synth_outcomes.
    WaveParams outcome_wave;
    double outcome_mu = 0.466;
    double outcome_sigma = 0.165;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument for a config no generator can satisfy.
    void validate() const;
};

/// Registry with per-year moments matching the targets; valid by
/// construction and a pure function of the config.
std::vector<FirmYearRecord> synth_registry(const SynthConfig& config);

/// Per-year top-1 SPI draws from the outcome density, t = year - first year.
struct YearDraws {
    int year = 0;
    std::vector<double> spi;
};
std::vector<YearDraws> synth_outcomes(const SynthConfig& config, GroupKey group = {});

/// Calibration targets: yearly top-1 / top-2..10 moments and sample sizes
/// observed for each cell, with meeting attendance around 0.857 ± 0.140 of
/// the top-10 holding.
SynthConfig default_synth_config(std::uint64_t seed);

/// Single group of `firms` per year over `years` years starting at
/// `first_year`, outcomes drawn from hypothesis_wave(h).
SynthConfig outcome_synth_config(std::uint64_t seed, double h = 1.5, int firms = 500, int years = 26,
                                 int first_year = 1996);

} // namespace ctrlpower
