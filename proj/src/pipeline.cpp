#include "ctrlpower/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ctrlpower/error.hpp"
#include "ctrlpower/kernels.hpp"
#include "csv.hpp"

#ifndef CTRLPOWER_VERSION
#define CTRLPOWER_VERSION "0.0.0"
#endif

namespace ctrlpower {

namespace {

std::vector<double> top1_spi(const std::vector<WeightedVotingGame>& games, const StatsOptions& opt) {
    return opt.parallel ? kernels::top1_spi_parallel(games, opt.grid, opt.threads)
                        : kernels::top1_spi_serial(games, opt.grid);
}

double dictator_ratio(const std::vector<double>& spi) {
    if (spi.empty()) return 0.0;
    const auto n = std::count(spi.begin(), spi.end(), 1.0);
    return static_cast<double>(n) / static_cast<double>(spi.size());
}

void fill_spi_lt1(YearStats& s, const std::vector<double>& spi) {
    std::vector<double> below;
    for (double v : spi)
        if (v < 1.0) below.push_back(v);
    s.n_spi_lt1 = below.size();
    if (below.empty()) return;
    s.spi_lt1_max = *std::max_element(below.begin(), below.end());
    s.spi_lt1_min = *std::min_element(below.begin(), below.end());
    if (below.size() == 1) {
        s.spi_lt1_mean = below.front();
        return;
    }
    const NormalFit nf = fit_normal(below);
    s.spi_lt1_mean = nf.mu;
    s.spi_lt1_sd = nf.sigma;
    s.spi_lt1_band = nf.band_ratio;
}

template <class Project>
std::optional<SeriesFit> fit_series(const std::vector<YearStats>& years, int first_year, Project project,
                                    const FourierOptions& opt) {
    SeriesFit sf;
    for (const auto& y : years) {
        const std::optional<double> v = project(y);
        if (!y.fitted || !v) continue;
        sf.years.push_back(y.year);
        sf.t.push_back(static_cast<double>(y.year - first_year));
        sf.observed.push_back(*v);
    }
    if (sf.years.size() < 4) return std::nullopt;
    sf.fit = fit_fourier1(TimeSeries{sf.t, sf.observed}, opt);
    for (double t : sf.t) sf.fitted.push_back(sf.fit.degenerate ? sf.fit.params.a0 : wave_eval(sf.fit.params, t));
    if (!sf.fit.degenerate) sf.extrema = fourier_extrema(sf.fit);
    return sf;
}

Diagnostics diagnose(const GroupReport& g, const PipelineConfig& config) {
    Diagnostics d;
    d.period_ratio_tolerance = config.period_ratio_tolerance;
    d.phase_expected = std::numbers::pi;
    d.phase_tolerance = config.phase_tolerance;
    if (g.m_top1 && g.m_top2_10 && !g.m_top1->fit.degenerate && !g.m_top2_10->fit.degenerate) {
        d.period_ratio = g.m_top2_10->fit.params.period / g.m_top1->fit.params.period;
        d.period_ratio_ok = std::abs(*d.period_ratio - d.period_ratio_expected) <=
                            d.period_ratio_tolerance * d.period_ratio_expected;
    }
    if (g.r_spi_1 && g.m_top2_10 && !g.r_spi_1->fit.degenerate && !g.m_top2_10->fit.degenerate) {
        d.phase_difference = phase_difference(g.r_spi_1->fit.params, g.m_top2_10->fit.params);
        d.phase_ok = std::abs(*d.phase_difference - d.phase_expected) <= d.phase_tolerance;
    }
    return d;
}

void finish_group(GroupReport& g, const PipelineConfig& config) {
    for (auto& y : g.years) {
        y.fitted = y.n_sample >= config.min_sample;
        if (y.fitted && !g.first_fit_year) g.first_fit_year = y.year;
    }
    if (!g.first_fit_year) return;
    const int origin = *g.first_fit_year;
    g.r_spi_1 = fit_series(
        g.years, origin, [](const YearStats& y) { return std::optional<double>(y.r_spi_1); }, config.fourier);
    g.m_top1 = fit_series(g.years, origin, [](const YearStats& y) { return y.m_top1; }, config.fourier);
    g.m_top2_10 = fit_series(g.years, origin, [](const YearStats& y) { return y.m_top2_10; }, config.fourier);
    g.diagnostics = diagnose(g, config);
}

void correlate(Report& report) {
    if (report.config.macro.empty()) return;
    const GroupReport* control = nullptr;
    for (const auto& g : report.groups)
        if (g.group == GroupKey{Board::main, Ownership::priv}) control = &g;

    for (const auto& [name, series] : report.config.macro) {
        std::map<int, double> macro(series.begin(), series.end());
        const std::pair<const char*, const std::optional<SeriesFit>*> targets[] = {
            {"r_spi_1", control ? &control->r_spi_1 : nullptr},
            {"m_top1", control ? &control->m_top1 : nullptr},
            {"m_top2_10", control ? &control->m_top2_10 : nullptr}};
        for (const auto& [target, fit] : targets) {
            CorrelationEntry e{name, target, std::nullopt, ""};
            if (!fit || !*fit) {
                e.note = "series not fitted";
            } else {
                std::vector<double> x, y;
                for (std::size_t i = 0; i < (*fit)->years.size(); ++i) {
                    const auto it = macro.find((*fit)->years[i]);
                    if (it == macro.end()) continue;
                    x.push_back(it->second);
                    y.push_back((*fit)->observed[i]);
                }
                try {
                    e.result = pearson(x, y);
                } catch (const std::invalid_argument& err) {
                    e.note = err.what();
                }
            }
            report.correlations.push_back(std::move(e));
        }
    }
}

} // namespace

std::string_view to_string(SpiMode m) {
    switch (m) {
    case SpiMode::top9: return "top9";
    case SpiMode::top10: return "top10";
    case SpiMode::top11: return "top11";
    }
    return "top10";
}

std::optional<SpiMode> parse_spi_mode(std::string_view s) {
    if (s == "top9") return SpiMode::top9;
    if (s == "top10") return SpiMode::top10;
    if (s == "top11") return SpiMode::top11;
    return std::nullopt;
}

WeightedVotingGame meeting_game(const FirmYearRecord& r, SpiMode mode) {
    switch (mode) {
    case SpiMode::top9: {
        const std::size_t n = std::min<std::size_t>(9, r.shares.size());
        return make_game(std::vector<double>(r.shares.begin(), r.shares.begin() + static_cast<std::ptrdiff_t>(n)));
    }
    case SpiMode::top10: return make_game(r.shares);
    case SpiMode::top11:
        if (!r.meeting_share) throw DataError("firm " + r.firm_id + " has no meeting_share for the top11 game");
        return extend_with_residual(make_game(r.shares), *r.meeting_share - r.top10());
    }
    throw std::invalid_argument("unknown spi mode");
}

std::optional<YearStats> year_stats(const std::vector<FirmYearRecord>& records, const StatsOptions& opt) {
    if (records.empty()) return std::nullopt;
    const GroupKey group = records.front().group();
    const int year = records.front().year;
    for (const auto& r : records)
        if (r.group() != group || r.year != year)
            throw std::invalid_argument("year_stats: records span more than one group-year");

    YearStats s;
    s.year = year;
    s.n_sample = records.size();

    std::vector<double> top1, rest;
    std::vector<WeightedVotingGame> g9, g10, g11;
    std::vector<double> meeting_ratio;
    for (const auto& r : records) {
        top1.push_back(r.top1());
        rest.push_back(r.top2_10());
        g9.push_back(meeting_game(r, SpiMode::top9));
        g10.push_back(meeting_game(r, SpiMode::top10));
        if (r.meeting_share) {
            g11.push_back(meeting_game(r, SpiMode::top11));
            meeting_ratio.push_back(*r.meeting_share / r.top10());
        } else if (opt.mode == SpiMode::top11) {
            throw DataError("firm " + r.firm_id + " has no meeting_share for the top11 game");
        }
    }

    const auto spi9 = top1_spi(g9, opt);
    const auto spi10 = top1_spi(g10, opt);
    const auto spi11 = top1_spi(g11, opt);
    s.r_spi_1_top9 = dictator_ratio(spi9);
    s.r_spi_1_top10 = dictator_ratio(spi10);
    if (!spi11.empty()) s.r_spi_1_top11 = dictator_ratio(spi11);

    const auto& primary = opt.mode == SpiMode::top9 ? spi9 : opt.mode == SpiMode::top10 ? spi10 : spi11;
    s.r_spi_1 = dictator_ratio(primary);
    fill_spi_lt1(s, primary);

    if (records.size() >= 2) {
        const NormalFit f1 = fit_normal(top1), f2 = fit_normal(rest);
        s.m_top1 = f1.mu;
        s.m_top1_sd = f1.sigma;
        s.m_top2_10 = f2.mu;
        s.m_top2_10_sd = f2.sigma;
    } else {
        s.m_top1 = top1.front();
        s.m_top2_10 = rest.front();
    }

    s.n_meeting = meeting_ratio.size();
    if (meeting_ratio.size() >= 2) {
        const NormalFit fm = fit_normal(meeting_ratio);
        s.meeting_ratio_mean = fm.mu;
        s.meeting_ratio_sd = fm.sigma;
        s.band_count_ratio = fm.band_ratio;
    } else if (meeting_ratio.size() == 1) {
        s.meeting_ratio_mean = meeting_ratio.front();
    }
    return s;
}

std::optional<YearStats> year_stats_from_spi(int year, const std::vector<double>& spi) {
    if (spi.empty()) return std::nullopt;
    for (double v : spi)
        if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("SPI values must lie in (0, 1]");
    YearStats s;
    s.year = year;
    s.n_sample = spi.size();
    s.r_spi_1 = dictator_ratio(spi);
    fill_spi_lt1(s, spi);
    return s;
}

MacroSeries read_macro_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open macro series '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("macro series '" + path + "' is empty");
    MacroSeries out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        try {
            if (fields.size() != 2) throw std::invalid_argument("expected 2 fields");
            std::size_t pos = 0;
            const int year = std::stoi(fields[0], &pos);
            if (pos != fields[0].size()) throw std::invalid_argument("bad year");
            const double value = std::stod(fields[1], &pos);
            if (pos != fields[1].size() || !std::isfinite(value)) throw std::invalid_argument("bad value");
            out.emplace_back(year, value);
        } catch (const std::exception&) {
            throw DataError(path + ": row " + std::to_string(row) + " is not 'year,value'");
        }
    }
    return out;
}

double wave_phase(const WaveParams& p) { return std::atan2(p.b1, p.a1); }

double phase_difference(const WaveParams& a, const WaveParams& b) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(wave_phase(b) - wave_phase(a), two_pi);
    if (d < 0.0) d += two_pi;
    if (d >= two_pi) d -= two_pi;
    return d;
}

Report run_pipeline(std::vector<FirmYearRecord> records, const PipelineConfig& config, Provenance provenance) {
    for (const auto& r : records) validate(r);
    canonical_sort(records);
    {
        std::ostringstream canon;
        emit_csv(canon, records);
        provenance.input_digest = fnv1a_hex(canon.str());
    }
    if (provenance.version.empty()) provenance.version = library_version();

    Report report;
    report.config = config;
    report.provenance = std::move(provenance);
    report.hypothesis = hypothesis_wave(config.h);

    const auto cells = group_records(apply_sample_filter(records));
    bool any_fitted = false;
    for (const auto& [key, cell] : cells) {
        GroupReport g;
        g.group = key;
        std::map<int, std::vector<FirmYearRecord>> by_year;
        for (const auto& r : cell) by_year[r.year].push_back(r);
        for (const auto& [year, rows] : by_year)
            if (auto s = year_stats(rows, config.stats)) g.years.push_back(*s);
        finish_group(g, config);
        any_fitted = any_fitted || g.first_fit_year.has_value();
        report.groups.push_back(std::move(g));
    }
    if (!any_fitted)
        throw DataError("no group has a year with at least " + std::to_string(config.min_sample) + " firms");
    correlate(report);
    return report;
}

Report run_pipeline(const std::vector<YearDraws>& draws, GroupKey group, const PipelineConfig& config,
                    Provenance provenance) {
    std::vector<YearDraws> sorted = draws;
    std::sort(sorted.begin(), sorted.end(), [](const YearDraws& a, const YearDraws& b) { return a.year < b.year; });
    {
        std::ostringstream canon;
        canon.precision(17);
        for (const auto& d : sorted) {
            canon << d.year;
            for (double v : d.spi) canon << ',' << v;
            canon << '\n';
        }
        provenance.input_digest = fnv1a_hex(canon.str());
    }
    if (provenance.version.empty()) provenance.version = library_version();

    Report report;
    report.config = config;
    report.provenance = std::move(provenance);
    report.hypothesis = hypothesis_wave(config.h);

    GroupReport g;
    g.group = group;
    for (const auto& d : sorted)
        if (auto s = year_stats_from_spi(d.year, d.spi)) g.years.push_back(*s);
    finish_group(g, config);
    if (!g.first_fit_year)
        throw DataError("no year has at least " + std::to_string(config.min_sample) + " draws");
    report.groups.push_back(std::move(g));
    correlate(report);
    return report;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string library_version() { return CTRLPOWER_VERSION; }

} // namespace ctrlpower
