#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ctrlpower/pipeline.hpp"

namespace ctrlpower {

enum class ReportFormat { json, csv_tables, plot_data, all };

std::optional<ReportFormat> parse_report_format(std::string_view s);

/// Full nested report.
nlohmann::json report_to_json(const Report& report);

/// Stable text form of report_to_json (two-space indent, trailing newline).
std::string report_json_text(const Report& report);

/// Writes the report under `dir` and returns the files written, relative
/// to `dir`:
///   json        report.json
///   csv_tables  year_stats_<group>.csv, table1_<group>.csv, table2.csv,
///               table3_<group>.csv, tableA_<group>.csv, fits.csv and,
///               when macro series were supplied, tableA5.csv
///   plot_data   plot_<group>_<series>.csv with year,t,observed,fitted
/// Throws DataError if the directory cannot be created or a file cannot be
/// written.
std::vector<std::string> emit_report(const Report& report, ReportFormat format, const std::filesystem::path& dir);

/// Column order of year_stats_<group>.csv.
const std::vector<std::string>& year_stats_columns();

/// Parses a year_stats_<group>.csv back into YearStats rows.
std::vector<YearStats> read_year_stats_csv(const std::filesystem::path& path);

} // namespace ctrlpower
