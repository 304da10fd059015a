#include "ctrlpower/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctrlpower/dataset.hpp"
#include "ctrlpower/error.hpp"
#include "ctrlpower/evolution.hpp"
#include "ctrlpower/fitting.hpp"
#include "ctrlpower/pipeline.hpp"
#include "ctrlpower/power_index.hpp"
#include "ctrlpower/report.hpp"
#include "csv.hpp"

namespace ctrlpower {

namespace {

/// Raised for flag combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fixed decimals with trailing zeros trimmed: 0.5000 -> 0.5.
std::string trimmed(double v, int precision) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    std::string s = os.str();
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string fixed(double v, int precision) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& field : detail::split_csv_line(text)) {
        double v = 0.0;
        const auto* end = field.data() + field.size();
        const auto [ptr, ec] = std::from_chars(field.data(), end, v);
        if (ec != std::errc() || ptr != end) throw UsageError("cannot parse '" + field + "' as a number");
        out.push_back(v);
    }
    return out;
}

PeriodRange parse_period_range(const std::string& text) {
    const auto sep = text.find_first_of(":,");
    if (sep == std::string::npos) throw UsageError("--period-range expects lo:hi");
    const auto v = parse_list(text.substr(0, sep) + "," + text.substr(sep + 1));
    return {v.at(0), v.at(1)};
}

InterruptionLaw parse_law(const std::string& text) {
    if (text == "uniform") return InterruptionLaw::uniform();
    if (text.rfind("fixed:", 0) == 0) {
        const auto v = parse_list(text.substr(6));
        if (v.size() != 1 || v[0] != std::floor(v[0])) throw UsageError("fixed:L expects an integer L");
        return InterruptionLaw::fixed(static_cast<unsigned>(v[0]));
    }
    const auto v = parse_list(text);
    if (v.size() != 4) throw UsageError("--law expects uniform, fixed:L or four weights");
    return InterruptionLaw({v[0], v[1], v[2], v[3]});
}

struct Options {
    // spi
    std::string shares;
    std::string method = "dp";
    std::optional<double> residual;
    int precision = 4;
    // shared
    std::string input;
    std::string output;
    std::optional<std::uint64_t> seed;
    double h = 1.5;
    std::size_t min_sample = 50;
    std::string period_range;
    double grid_step = 0.05;
    std::string spi_mode = "top10";
    std::string format = "json";
    int threads = 0;
    // evolve
    unsigned k = 5;
    unsigned steps = 24;
    std::string law = "uniform";
    std::optional<double> a0, a1, b1, period;
    double t_from = 0.0, t_to = 36.0, t_step = 1.0;
    double t = 0.0;
    unsigned points = 20;
    // synth / pipeline
    std::string synth;
    std::optional<double> split_alpha;
    int firms = 500;
    int years = 26;
    int first_year = 1996;
    std::vector<std::string> macro;
};

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty() || path == "-") return fallback;
    file.open(path, std::ios::binary);
    if (!file) throw DataError("cannot write '" + path + "'");
    return file;
}

void print_profile(std::ostream& out, const PowerProfile& p, int precision) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << fixed(p.spi[i], precision);
    out << '\n';
}

PowerProfile compute(const WeightedVotingGame& g, const std::string& method) {
    if (method == "dp") return spi_dp(g);
    if (method == "subset") return spi_subset(g);
    if (method == "oracle") return spi_permutation_oracle(g);
    throw UsageError("--method must be dp, subset or oracle");
}

int cmd_spi(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.shares.empty() == o.input.empty()) throw UsageError("spi needs exactly one of --shares or --input");
    if (!o.shares.empty()) {
        auto game = make_game(parse_list(o.shares));
        if (o.residual) game = extend_with_residual(game, *o.residual);
        print_profile(out, compute(game, o.method), o.precision);
        return kExitOk;
    }
    const auto mode = parse_spi_mode(o.spi_mode);
    if (!mode) throw UsageError("--spi-mode must be top9, top10 or top11");
    const auto ingest = ingest_csv_file(o.input);
    for (const auto& d : ingest.diagnostics) err << "warning: " << d << '\n';
    std::ofstream file;
    std::ostream& dst = open_output(o.output, file, out);
    dst << "firm_id,year,spi\n";
    for (const auto& r : ingest.records) {
        const auto p = compute(meeting_game(r, *mode), o.method);
        dst << detail::quote_csv_field(r.firm_id) << ',' << r.year << ",\"";
        for (std::size_t i = 0; i < p.size(); ++i) dst << (i ? "," : "") << fixed(p.spi[i], o.precision);
        dst << "\"\n";
    }
    return ingest.records.empty() && !ingest.diagnostics.empty() ? kExitData : kExitOk;
}

void print_states(std::ostream& out, const std::vector<Ratio>& states, int precision) {
    for (std::size_t i = 0; i < states.size(); ++i) out << (i ? ", " : "") << trimmed(states[i].value(), precision);
    out << '\n';
}

WaveParams wave_from(const Options& o) {
    const bool explicit_wave = o.a0 || o.a1 || o.b1 || o.period;
    if (!explicit_wave) return hypothesis_wave(o.h).params;
    if (!(o.a0 && o.a1 && o.b1 && o.period)) throw UsageError("explicit waves need --a0, --a1, --b1 and --period");
    if (!(*o.period > 0.0)) throw UsageError("--period must be positive");
    return {*o.a0, *o.a1, *o.b1, *o.period};
}

int cmd_evolve(const std::string& what, const Options& o, std::ostream& out) {
    std::ofstream file;
    std::ostream& dst = open_output(o.output, file, out);
    if (what == "ratios") {
        print_states(dst, ratio_sequence(o.k), o.precision);
    } else if (what == "walk") {
        if (!o.seed) throw UsageError("evolve walk requires --seed");
        const auto walk = collapse_walk(*o.seed, o.steps, parse_law(o.law));
        print_states(dst, walk.states, o.precision);
    } else if (what == "wave") {
        const WaveParams w = wave_from(o);
        if (!(o.t_step > 0.0) || o.t_to < o.t_from) throw UsageError("wave needs --from <= --to and --step > 0");
        dst << "t,value\n";
        const auto n = static_cast<std::size_t>(std::floor((o.t_to - o.t_from) / o.t_step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = o.t_from + static_cast<double>(i) * o.t_step;
            dst << trimmed(t, 6) << ',' << trimmed(wave_eval(w, t), o.precision) << '\n';
        }
    } else if (what == "density") {
        const bool explicit_wave = o.a0 || o.a1 || o.b1 || o.period;
        const ControlPowerPdf pdf(explicit_wave ? wave_from(o) : reference_wave());
        if (o.points < 1) throw UsageError("--points must be positive");
        dst << "spi,value\n";
        for (unsigned i = 1; i <= o.points; ++i) {
            const double spi = static_cast<double>(i) / static_cast<double>(o.points);
            dst << trimmed(spi, 6) << ',' << trimmed(pdf.eval(spi, o.t), o.precision) << '\n';
        }
    }
    return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
    if (o.input.empty()) throw UsageError("fit requires --input");
    std::ifstream in(o.input);
    if (!in) throw DataError("cannot open '" + o.input + "'");
    TimeSeries series;
    std::string line;
    std::getline(in, line); // header
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> v;
        try {
            v = parse_list(line);
        } catch (const UsageError&) {
            throw DataError(o.input + ": row " + std::to_string(row) + " is not numeric");
        }
        if (v.size() != 2) throw DataError(o.input + ": row " + std::to_string(row) + " needs t,y");
        series.t.push_back(v[0]);
        series.y.push_back(v[1]);
    }
    FourierOptions opt;
    opt.grid_step = o.grid_step;
    if (!o.period_range.empty()) opt.period_range = parse_period_range(o.period_range);
    FourierFit fit;
    try {
        fit = fit_fourier1(series, opt);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    nlohmann::json j;
    j["a0"] = fit.params.a0;
    j["a1"] = fit.params.a1;
    j["b1"] = fit.params.b1;
    j["T"] = fit.degenerate ? nlohmann::json(nullptr) : nlohmann::json(fit.params.period);
    j["sse"] = fit.sse;
    j["rmse"] = fit.rmse;
    j["r2"] = fit.r_squared;
    j["degenerate"] = fit.degenerate;
    if (fit.degenerate) {
        j["max"] = nullptr;
        j["min"] = nullptr;
    } else {
        const auto [hi, lo] = fourier_extrema(fit);
        j["max"] = hi;
        j["min"] = lo;
    }
    std::ofstream file;
    open_output(o.output, file, out) << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_synth(const std::string& what, const Options& o, std::ostream& out) {
    if (!o.seed) throw UsageError("synth requires --seed");
    std::ofstream file;
    std::ostream& dst = open_output(o.output, file, out);
    if (what == "registry") {
        SynthConfig c = default_synth_config(*o.seed);
        c.split_alpha = o.split_alpha;
        emit_csv(dst, synth_registry(c));
    } else {
        const auto draws = synth_outcomes(outcome_synth_config(*o.seed, o.h, o.firms, o.years, o.first_year));
        dst << "year,spi\n";
        char buf[64];
        for (const auto& d : draws) {
            for (double v : d.spi) {
                const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
                dst << d.year << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
            }
        }
    }
    return kExitOk;
}

int cmd_pipeline(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.input.empty() == o.synth.empty()) throw UsageError("pipeline needs exactly one of --input or --synth");
    const auto mode = parse_spi_mode(o.spi_mode);
    if (!mode) throw UsageError("--spi-mode must be top9, top10 or top11");
    const auto format = parse_report_format(o.format);
    if (!format) throw UsageError("--format must be json, csv-tables, plot-data or all");
    if (o.output.empty() && *format != ReportFormat::json)
        throw UsageError("--format " + o.format + " writes files and needs --output");

    PipelineConfig config;
    config.stats.mode = *mode;
    config.stats.threads = o.threads;
    config.min_sample = o.min_sample;
    config.h = o.h;
    config.fourier.grid_step = o.grid_step;
    if (!o.period_range.empty()) config.fourier.period_range = parse_period_range(o.period_range);
    for (const auto& m : o.macro) {
        const auto eq = m.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--macro expects name=path");
        config.macro[m.substr(0, eq)] = read_macro_csv(m.substr(eq + 1));
    }

    Provenance prov;
    prov.seed = o.seed;
    Report report;
    if (!o.input.empty()) {
        prov.source = "csv";
        auto ingest = ingest_csv_file(o.input);
        for (const auto& d : ingest.diagnostics) err << "warning: " << d << '\n';
        report = run_pipeline(std::move(ingest.records), config, prov);
    } else {
        if (!o.seed) throw UsageError("--synth requires --seed");
        prov.source = "synth:" + o.synth;
        if (o.synth == "default") {
            SynthConfig c = default_synth_config(*o.seed);
            c.split_alpha = o.split_alpha;
            report = run_pipeline(synth_registry(c), config, prov);
        } else if (o.synth == "outcomes") {
            const auto c = outcome_synth_config(*o.seed, o.h, o.firms, o.years, o.first_year);
            report = run_pipeline(synth_outcomes(c), GroupKey{}, config, prov);
        } else {
            throw UsageError("--synth must be default or outcomes");
        }
    }

    if (o.output.empty()) {
        out << report_json_text(report);
    } else {
        for (const auto& f : emit_report(report, *format, o.output)) err << "wrote " << f << '\n';
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shareholder control power: voting power indices, evolution models and the fitting pipeline",
                 "ctrlpower"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    Options o;

    auto* spi = app.add_subcommand("spi", "Shapley-Shubik index of a voting game");
    spi->add_option("--shares", o.shares, "Comma-separated player weights, e.g. 0.3,0.1,0.05");
    spi->add_option("--input", o.input, "Registry CSV; prints the meeting game's profile per firm");
    spi->add_option("--output", o.output, "Output path (default stdout)");
    spi->add_option("--method", o.method, "dp, subset or oracle")->capture_default_str();
    spi->add_option("--residual", o.residual, "Append max(residual, 0) as an extra player");
    spi->add_option("--spi-mode", o.spi_mode, "Meeting game for --input: top9, top10 or top11")->capture_default_str();
    spi->add_option("--precision", o.precision, "Decimals printed")->capture_default_str();

    auto* evolve = app.add_subcommand("evolve", "Evolution sequences and waves as CSV");
    evolve->require_subcommand(1);
    auto* ratios = evolve->add_subcommand("ratios", "First k probability states 1/2, 2/3, 3/5, ...");
    ratios->add_option("--k", o.k, "Number of states")->capture_default_str();
    auto* walk = evolve->add_subcommand("walk", "Randomly interrupted evolution collapsing to 1/2");
    walk->add_option("--steps", o.steps, "Climbing operations")->capture_default_str();
    walk->add_option("--law", o.law, "uniform, fixed:L or four weights w1,w2,w3,w4")->capture_default_str();
    walk->add_option("--seed", o.seed, "Random seed");
    auto* wave = evolve->add_subcommand("wave", "Evaluate a first-order wave over t");
    auto* density = evolve->add_subcommand("density", "Control-power density over SPI at time --t");
    for (auto* sub : {wave, density}) {
        sub->add_option("--h", o.h, "Years per evolution operation")->capture_default_str();
        sub->add_option("--a0", o.a0, "Mean level");
        sub->add_option("--a1", o.a1, "Cosine coefficient");
        sub->add_option("--b1", o.b1, "Sine coefficient");
        sub->add_option("--period", o.period, "Period in years");
    }
    wave->add_option("--from", o.t_from, "First time")->capture_default_str();
    wave->add_option("--to", o.t_to, "Last time")->capture_default_str();
    wave->add_option("--step", o.t_step, "Time step")->capture_default_str();
    density->add_option("--t", o.t, "Time in years")->capture_default_str();
    density->add_option("--points", o.points, "Grid points over SPI")->capture_default_str();
    for (auto* sub : {ratios, walk, wave, density}) {
        sub->add_option("--output", o.output, "Output path (default stdout)");
        sub->add_option("--precision", o.precision, "Decimals printed")->capture_default_str();
    }

    auto* fit = app.add_subcommand("fit", "First-order Fourier fit of a t,y CSV");
    fit->add_option("--input", o.input, "CSV with header and t,y rows")->required();
    fit->add_option("--output", o.output, "Output path (default stdout)");
    fit->add_option("--period-range", o.period_range, "lo:hi in years (default 4:2*span)");
    fit->add_option("--grid-step", o.grid_step, "Period grid step in years")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Synthetic registries and outcome draws");
    synth->require_subcommand(1);
    auto* registry = synth->add_subcommand("registry", "Calibrated four-group registry CSV");
    registry->add_option("--split-alpha", o.split_alpha, "Dirichlet concentration for the top-2..10 split");
    auto* outcomes = synth->add_subcommand("outcomes", "Top-1 SPI draws per year (year,spi)");
    outcomes->add_option("--h", o.h, "Years per evolution operation")->capture_default_str();
    outcomes->add_option("--firms", o.firms, "Firms per synthetic year")->capture_default_str();
    outcomes->add_option("--years", o.years, "Number of synthetic years")->capture_default_str();
    outcomes->add_option("--first-year", o.first_year, "First synthetic year")->capture_default_str();
    for (auto* sub : {registry, outcomes}) {
        sub->add_option("--seed", o.seed, "Random seed (required)");
        sub->add_option("--output", o.output, "Output path (default stdout)");
    }

    auto* pipeline = app.add_subcommand("pipeline", "Run the full aggregation and fitting pipeline");
    pipeline->add_option("--input", o.input, "Registry CSV");
    pipeline->add_option("--synth", o.synth, "default or outcomes");
    pipeline->add_option("--seed", o.seed, "Random seed (required with --synth)");
    pipeline->add_option("--output", o.output, "Output directory (default: JSON on stdout)");
    pipeline->add_option("--format", o.format, "json, csv-tables, plot-data or all")->capture_default_str();
    pipeline->add_option("--h", o.h, "Years per evolution operation")->capture_default_str();
    pipeline->add_option("--min-sample", o.min_sample, "Minimum firms for a year to enter the fit")->capture_default_str();
    pipeline->add_option("--period-range", o.period_range, "lo:hi in years");
    pipeline->add_option("--grid-step", o.grid_step, "Period grid step in years")->capture_default_str();
    pipeline->add_option("--spi-mode", o.spi_mode, "Meeting game: top9, top10 or top11")->capture_default_str();
    pipeline->add_option("--macro", o.macro, "name=path to a year,value CSV (repeatable)");
    pipeline->add_option("--threads", o.threads, "Worker threads (0 = OpenMP default)")->capture_default_str();
    pipeline->add_option("--split-alpha", o.split_alpha, "Dirichlet concentration for the top-2..10 split");
    pipeline->add_option("--firms", o.firms, "Firms per synthetic year")->capture_default_str();
    pipeline->add_option("--years", o.years, "Number of synthetic years")->capture_default_str();
    pipeline->add_option("--first-year", o.first_year, "First synthetic year")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*spi) return cmd_spi(o, out, err);
        if (*evolve) {
            for (auto* sub : {ratios, walk, wave, density})
                if (*sub) return cmd_evolve(sub->get_name(), o, out);
        }
        if (*fit) return cmd_fit(o, out);
        if (*synth) return cmd_synth(*registry ? "registry" : "outcomes", o, out);
        if (*pipeline) return cmd_pipeline(o, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    err << app.help();
    return kExitUsage;
}

} // namespace ctrlpower
