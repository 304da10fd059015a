#include "ctrlpower/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ctrlpower/error.hpp"
#include "csv.hpp"

namespace ctrlpower {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

// Optional fields of YearStats in CSV column order.
struct OptionalField {
    const char* name;
    std::optional<double> YearStats::*member;
};

const std::vector<OptionalField>& optional_fields() {
    static const std::vector<OptionalField> fields = {
        {"m_top1", &YearStats::m_top1},
        {"m_top1_sd", &YearStats::m_top1_sd},
        {"m_top2_10", &YearStats::m_top2_10},
        {"m_top2_10_sd", &YearStats::m_top2_10_sd},
        {"meeting_ratio_mean", &YearStats::meeting_ratio_mean},
        {"meeting_ratio_sd", &YearStats::meeting_ratio_sd},
        {"band_count_ratio", &YearStats::band_count_ratio},
        {"r_spi_1_top9", &YearStats::r_spi_1_top9},
        {"r_spi_1_top10", &YearStats::r_spi_1_top10},
        {"r_spi_1_top11", &YearStats::r_spi_1_top11},
        {"spi_lt1_max", &YearStats::spi_lt1_max},
        {"spi_lt1_min", &YearStats::spi_lt1_min},
        {"spi_lt1_mean", &YearStats::spi_lt1_mean},
        {"spi_lt1_sd", &YearStats::spi_lt1_sd},
        {"spi_lt1_band", &YearStats::spi_lt1_band},
    };
    return fields;
}

json year_json(const YearStats& y) {
    json j;
    j["year"] = y.year;
    j["n_sample"] = y.n_sample;
    j["r_spi_1"] = y.r_spi_1;
    j["n_meeting"] = y.n_meeting;
    j["n_spi_lt1"] = y.n_spi_lt1;
    j["fitted"] = y.fitted;
    for (const auto& f : optional_fields()) j[f.name] = opt(y.*f.member);
    return j;
}

json fit_json(const FourierFit& f) {
    json j;
    j["a0"] = f.params.a0;
    j["a1"] = f.params.a1;
    j["b1"] = f.params.b1;
    j["T"] = f.degenerate ? json(nullptr) : json(f.params.period);
    j["sse"] = f.sse;
    j["rmse"] = f.rmse;
    j["r2"] = f.r_squared;
    j["degenerate"] = f.degenerate;
    if (f.degenerate) {
        j["max"] = nullptr;
        j["min"] = nullptr;
    } else {
        const auto [hi, lo] = fourier_extrema(f);
        j["max"] = hi;
        j["min"] = lo;
    }
    return j;
}

json series_json(const std::optional<SeriesFit>& s) {
    if (!s) return nullptr;
    json j = fit_json(s->fit);
    j["years"] = s->years;
    j["t"] = s->t;
    j["observed"] = s->observed;
    j["fitted"] = s->fitted;
    return j;
}

json diagnostics_json(const Diagnostics& d) {
    json j;
    j["period_ratio"] = opt(d.period_ratio);
    j["period_ratio_expected"] = d.period_ratio_expected;
    j["period_ratio_tolerance"] = d.period_ratio_tolerance;
    j["period_ratio_ok"] = opt(d.period_ratio_ok);
    j["phase_difference"] = opt(d.phase_difference);
    j["phase_expected"] = d.phase_expected;
    j["phase_tolerance"] = d.phase_tolerance;
    j["phase_ok"] = opt(d.phase_ok);
    return j;
}

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw DataError("cannot write '" + path.string() + "'");
    }
    template <class... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ",") << fields, first = false), ...);
        out_ << '\n';
    }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_) throw DataError("failed writing '" + path_.string() + "'");
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void write_year_stats(const GroupReport& g, const std::filesystem::path& path) {
    CsvFile f(path);
    f.row(year_stats_columns());
    for (const auto& y : g.years) {
        std::vector<std::string> row = {std::to_string(y.year), std::to_string(y.n_sample), num(y.r_spi_1),
                                        std::to_string(y.n_meeting), std::to_string(y.n_spi_lt1),
                                        y.fitted ? "1" : "0"};
        for (const auto& field : optional_fields()) row.push_back(num(y.*field.member));
        f.row(row);
    }
    f.close();
}

void write_tables(const Report& report, const std::filesystem::path& dir, std::vector<std::string>& files) {
    auto add = [&](const std::string& name) {
        files.push_back(name);
        return dir / name;
    };
    for (const auto& g : report.groups) {
        const std::string name = g.group.name();
        write_year_stats(g, add("year_stats_" + name + ".csv"));

        CsvFile t1(add("table1_" + name + ".csv"));
        t1.row("year", "meeting_ratio_mean", "meeting_ratio_sd", "band_count_ratio", "r_spi_1_top9",
               "r_spi_1_top10", "r_spi_1_top11", "n_meeting", "n_sample");
        for (const auto& y : g.years)
            t1.row(y.year, num(y.meeting_ratio_mean), num(y.meeting_ratio_sd), num(y.band_count_ratio),
                   num(y.r_spi_1_top9), num(y.r_spi_1_top10), num(y.r_spi_1_top11), y.n_meeting, y.n_sample);
        t1.close();

        CsvFile t3(add("table3_" + name + ".csv"));
        t3.row("year", "max", "min", "mean", "sd", "band_ratio", "n_sample");
        for (const auto& y : g.years)
            t3.row(y.year, num(y.spi_lt1_max), num(y.spi_lt1_min), num(y.spi_lt1_mean), num(y.spi_lt1_sd),
                   num(y.spi_lt1_band), y.n_spi_lt1);
        t3.close();

        CsvFile ta(add("tableA_" + name + ".csv"));
        ta.row("year", "top1_mean", "top1_sd", "top2_10_mean", "top2_10_sd", "n_sample");
        for (const auto& y : g.years)
            ta.row(y.year, num(y.m_top1), num(y.m_top1_sd), num(y.m_top2_10), num(y.m_top2_10_sd), y.n_sample);
        ta.close();
    }

    // Table 2 puts every group side by side over the union of years.
    std::set<int> years;
    for (const auto& g : report.groups)
        for (const auto& y : g.years) years.insert(y.year);
    CsvFile t2(add("table2.csv"));
    std::vector<std::string> header = {"year"};
    for (const auto& g : report.groups) {
        header.push_back(g.group.name() + "_ratio");
        header.push_back(g.group.name() + "_n");
    }
    t2.row(header);
    for (int year : years) {
        std::vector<std::string> row = {std::to_string(year)};
        for (const auto& g : report.groups) {
            const auto it = std::find_if(g.years.begin(), g.years.end(), [&](const YearStats& y) { return y.year == year; });
            row.push_back(it == g.years.end() ? "" : num(it->r_spi_1));
            row.push_back(it == g.years.end() ? "" : std::to_string(it->n_sample));
        }
        t2.row(row);
    }
    t2.close();

    CsvFile fits(add("fits.csv"));
    fits.row("group", "series", "a0", "a1", "b1", "T", "sse", "rmse", "r2", "max", "min", "degenerate", "n_years");
    for (const auto& g : report.groups) {
        const std::pair<const char*, const std::optional<SeriesFit>*> series[] = {
            {"r_spi_1", &g.r_spi_1}, {"m_top1", &g.m_top1}, {"m_top2_10", &g.m_top2_10}};
        for (const auto& [label, s] : series) {
            if (!*s) continue;
            const auto& f = (*s)->fit;
            fits.row(g.group.name(), label, num(f.params.a0), num(f.params.a1), num(f.params.b1),
                     f.degenerate ? std::string() : num(f.params.period), num(f.sse), num(f.rmse), num(f.r_squared),
                     (*s)->extrema ? num((*s)->extrema->first) : std::string(),
                     (*s)->extrema ? num((*s)->extrema->second) : std::string(), f.degenerate ? 1 : 0,
                     (*s)->years.size());
        }
    }
    fits.close();

    if (!report.correlations.empty()) {
        CsvFile a5(add("tableA5.csv"));
        a5.row("macro", "target", "r", "p_value", "n", "note");
        for (const auto& c : report.correlations)
            a5.row(detail::quote_csv_field(c.macro), c.target, c.result ? num(c.result->r) : std::string(),
                   c.result ? num(c.result->p_value) : std::string(),
                   c.result ? std::to_string(c.result->n) : std::string(), detail::quote_csv_field(c.note));
        a5.close();
    }
}

void write_plot_data(const Report& report, const std::filesystem::path& dir, std::vector<std::string>& files) {
    for (const auto& g : report.groups) {
        const std::pair<const char*, const std::optional<SeriesFit>*> series[] = {
            {"r_spi_1", &g.r_spi_1}, {"m_top1", &g.m_top1}, {"m_top2_10", &g.m_top2_10}};
        for (const auto& [label, s] : series) {
            if (!*s) continue;
            const std::string name = "plot_" + g.group.name() + "_" + label + ".csv";
            files.push_back(name);
            CsvFile f(dir / name);
            f.row("year", "t", "observed", "fitted");
            for (std::size_t i = 0; i < (*s)->years.size(); ++i)
                f.row((*s)->years[i], num((*s)->t[i]), num((*s)->observed[i]), num((*s)->fitted[i]));
            f.close();
        }
    }
}

} // namespace

std::optional<ReportFormat> parse_report_format(std::string_view s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv-tables") return ReportFormat::csv_tables;
    if (s == "plot-data") return ReportFormat::plot_data;
    if (s == "all") return ReportFormat::all;
    return std::nullopt;
}

json report_to_json(const Report& report) {
    json j;
    json prov;
    prov["source"] = report.provenance.source;
    prov["input_digest"] = report.provenance.input_digest;
    prov["seed"] = report.provenance.seed ? json(*report.provenance.seed) : json(nullptr);
    prov["version"] = report.provenance.version;
    j["provenance"] = prov;

    const auto& c = report.config;
    json cfg;
    cfg["spi_mode"] = std::string(to_string(c.stats.mode));
    cfg["grid"] = c.stats.grid;
    cfg["min_sample"] = c.min_sample;
    cfg["h"] = c.h;
    cfg["grid_step"] = c.fourier.grid_step;
    if (c.fourier.period_range)
        cfg["period_range"] = {c.fourier.period_range->lo, c.fourier.period_range->hi};
    else
        cfg["period_range"] = nullptr;
    j["config"] = cfg;

    json hyp;
    hyp["period"] = report.hypothesis.params.period;
    hyp["max"] = report.hypothesis.maximum().value();
    hyp["min"] = report.hypothesis.minimum().value();
    j["hypothesis"] = hyp;

    json groups = json::array();
    for (const auto& g : report.groups) {
        json gj;
        gj["group"] = g.group.name();
        gj["first_fit_year"] = g.first_fit_year ? json(*g.first_fit_year) : json(nullptr);
        json years = json::array();
        for (const auto& y : g.years) years.push_back(year_json(y));
        gj["years"] = years;
        gj["fits"] = {{"r_spi_1", series_json(g.r_spi_1)},
                      {"m_top1", series_json(g.m_top1)},
                      {"m_top2_10", series_json(g.m_top2_10)}};
        gj["diagnostics"] = diagnostics_json(g.diagnostics);
        groups.push_back(gj);
    }
    j["groups"] = groups;

    json corr = json::array();
    for (const auto& e : report.correlations) {
        json cj;
        cj["macro"] = e.macro;
        cj["target"] = e.target;
        cj["r"] = e.result ? json(e.result->r) : json(nullptr);
        cj["p_value"] = e.result ? json(e.result->p_value) : json(nullptr);
        cj["n"] = e.result ? json(e.result->n) : json(nullptr);
        cj["note"] = e.note;
        corr.push_back(cj);
    }
    j["correlations"] = corr;
    return j;
}

std::string report_json_text(const Report& report) { return report_to_json(report).dump(2) + "\n"; }

std::vector<std::string> emit_report(const Report& report, ReportFormat format, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
    std::vector<std::string> files;
    if (format == ReportFormat::json || format == ReportFormat::all) {
        std::ofstream out(dir / "report.json", std::ios::binary);
        if (!out) throw DataError("cannot write '" + (dir / "report.json").string() + "'");
        out << report_json_text(report);
        if (!out) throw DataError("failed writing report.json");
        files.push_back("report.json");
    }
    if (format == ReportFormat::csv_tables || format == ReportFormat::all) write_tables(report, dir, files);
    if (format == ReportFormat::plot_data || format == ReportFormat::all) write_plot_data(report, dir, files);
    return files;
}

const std::vector<std::string>& year_stats_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {"year", "n_sample", "r_spi_1", "n_meeting", "n_spi_lt1", "fitted"};
        for (const auto& f : optional_fields()) c.push_back(f.name);
        return c;
    }();
    return cols;
}

std::vector<YearStats> read_year_stats_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    std::getline(in, line);
    if (detail::split_csv_line(line) != year_stats_columns())
        throw DataError("'" + path.string() + "' does not carry the year-stats header");
    auto to_double = [](const std::string& s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("bad number '" + s + "'");
        return v;
    };
    std::vector<YearStats> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != year_stats_columns().size()) throw DataError("bad year-stats row");
        YearStats y;
        y.year = std::stoi(f[0]);
        y.n_sample = std::stoul(f[1]);
        y.r_spi_1 = to_double(f[2]);
        y.n_meeting = std::stoul(f[3]);
        y.n_spi_lt1 = std::stoul(f[4]);
        y.fitted = f[5] == "1";
        for (std::size_t i = 0; i < optional_fields().size(); ++i) {
            const auto& cell = f[6 + i];
            if (!cell.empty()) y.*(optional_fields()[i].member) = to_double(cell);
        }
        out.push_back(y);
    }
    return out;
}

} // namespace ctrlpower
