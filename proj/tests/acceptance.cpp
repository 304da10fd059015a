// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here and printed next to the measured values.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "ctrlpower/dataset.hpp"
#include "ctrlpower/evolution.hpp"
#include "ctrlpower/fitting.hpp"
#include "ctrlpower/pipeline.hpp"
#include "ctrlpower/power_index.hpp"
#include "ctrlpower/random.hpp"
#include "ctrlpower/report.hpp"
#include "support.hpp"

using namespace ctrlpower;
namespace fs = std::filesystem;

namespace {

namespace tol {
constexpr double kSpiAgreement = 1e-12;
constexpr double kSpiRuntimeSec = 60.0;
constexpr double kEfficiency = 1e-12;
constexpr double kGoldenLo = 0.994, kGoldenHi = 0.996;
constexpr double kResidualRelative = 1e-6;
constexpr double kResidualExactRelative = 1e-12;
constexpr double kDensityMass = 1e-9;
constexpr double kCleanPeriodRel = 0.01;
constexpr double kCleanCoef = 1e-3;
constexpr double kNoisyPeriodRel = 0.05;
constexpr double kNoisySuccess = 0.90;
constexpr double kFitRuntimeSec = 30.0;
constexpr double kPipelinePeriodRel = 0.10;
constexpr double kPipelineExtrema = 0.05;
constexpr double kPeriodRatioRel = 0.05;
constexpr double kPhaseRad = 0.1;
constexpr double kNormalMoments = 0.01;
constexpr double kBandRatio = 0.02;
constexpr double kOneSigmaMass = 0.682689492137;
} // namespace tol

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome spi_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    support::Engine eng(20240601);
    double worst = 0.0;
    int games = 0;
    // Integer weights exercise exact ties; six-decimal shares mimic registry data.
    while (games < 400) {
        const std::size_t n = 1 + static_cast<std::size_t>(games % 9);
        std::vector<double> w;
        std::vector<std::int64_t> units;
        if (games % 2 == 0) {
            units = support::random_int_weights(eng, n, 12);
            w = support::as_double(units);
        } else {
            units = support::random_int_weights(eng, n, 500000);
            if (support::has_exact_tie(units)) continue;
            w = support::as_double(units, 1e-6);
        }
        const auto g = make_game(w);
        const auto oracle = spi_permutation_oracle(g);
        const auto reference = support::brute_force_spi(units);
        worst = std::max({worst, support::max_abs_diff(oracle.spi, reference),
                          support::max_abs_diff(spi_subset(g).spi, oracle.spi),
                          support::max_abs_diff(spi_dp(g).spi, oracle.spi)});
        ++games;
    }
    const double secs = seconds_since(t0);
    return {worst <= tol::kSpiAgreement && secs < tol::kSpiRuntimeSec,
            fmt("%d games n<=9, max |diff| %.3g (tol %.0e), %.2f s (limit %.0f s)", games, worst, tol::kSpiAgreement,
                secs, tol::kSpiRuntimeSec)};
}

Outcome spi_axioms() {
    support::Engine eng(77);
    int games = 0, failures = 0;
    double worst_sum = 0.0;
    for (; games < 1200; ++games) {
        const std::size_t n = 1 + static_cast<std::size_t>(games % 12);
        auto units = support::random_int_weights(eng, n, 30);
        if (n >= 2) units[n - 1] = units[0]; // a duplicated weight for symmetry
        if (std::accumulate(units.begin(), units.end(), std::int64_t{0}) == 0) units[0] = units[n - 1] = 1;
        const auto w = support::as_double(units);
        for (const auto& p : {spi_dp(make_game(w)), spi_subset(make_game(w))}) {
            double sum = 0.0;
            for (double v : p.spi) sum += v;
            worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
            std::uint64_t pivots = 0;
            for (auto v : p.pivots) pivots += v;
            failures += pivots != p.orderings || std::abs(sum - 1.0) > tol::kEfficiency;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (units[i] == units[j]) failures += p.spi[i] != p.spi[j];
                    if (units[i] >= units[j]) failures += p.spi[i] < p.spi[j];
                }
        }
        auto with_dummy = w;
        with_dummy.push_back(0.0);
        const auto base = spi_dp(make_game(w));
        const auto dummy = spi_dp(make_game(with_dummy));
        failures += dummy.spi.back() != 0.0;
        failures += support::max_abs_diff(std::vector<double>(dummy.spi.begin(), dummy.spi.end() - 1), base.spi) >
                    tol::kSpiAgreement;
        auto scaled = w;
        for (double& x : scaled) x *= 2.5;
        failures += spi_dp(make_game(scaled)).spi != base.spi;
        failures += spi_subset(make_game(scaled)).spi != spi_subset(make_game(w)).spi;
    }
    return {failures == 0, fmt("%d games n<=12, %d violations, max |sum-1| %.3g", games, failures, worst_sum)};
}

Outcome fibonacci_sequence() {
    const auto seq = ratio_sequence(5);
    const std::vector<Ratio> expected = {{1, 2}, {2, 3}, {3, 5}, {5, 8}, {8, 13}};
    const double q = seq.back().value() / 0.618;
    std::ostringstream s;
    for (std::size_t i = 0; i < seq.size(); ++i) s << (i ? ", " : "") << seq[i];
    return {seq == expected && q >= tol::kGoldenLo && q <= tol::kGoldenHi,
            fmt("[%s], (8/13)/0.618 = %.6f (range [%.3f, %.3f])", s.str().c_str(), q, tol::kGoldenLo, tol::kGoldenHi)};
}

Outcome hypothesis_wave_exact() {
    const auto w = hypothesis_wave(1.5);
    const bool ok = w.params.period == 18.0 && w.maximum() == Ratio(2, 3) && w.minimum() == Ratio(1, 2);
    std::ostringstream s;
    s << "T = " << w.params.period << ", max = " << w.maximum() << ", min = " << w.minimum();
    return {ok, s.str()};
}

Outcome wave_equation() {
    const auto w = reference_wave();
    const double h = 1.5, tl = 11.571;
    double peak = 0.0;
    for (int i = 0; i <= 2000; ++i) peak = std::max(peak, std::abs(wave_d2t(w, w.period * i / 2000.0)));
    double worst_published = 0.0, worst_exact = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = w.period * i / 2000.0;
        worst_published = std::max(worst_published, std::abs(wave_equation_residual(w, h, t, tl)) / peak);
        worst_exact = std::max(worst_exact, std::abs(wave_equation_residual(w, h, t)) / peak);
    }
    const bool ok = worst_published <= tol::kResidualRelative && worst_exact <= tol::kResidualExactRelative;
    return {ok, fmt("T=17.357, T_l=11.571, h=1.5: max |res|/max|d2R/dt2| = %.3g (tol %.0e); "
                    "T_l=T/h: %.3g (tol %.0e)",
                    worst_published, tol::kResidualRelative, worst_exact, tol::kResidualExactRelative)};
}

Outcome density_normalization() {
    const ControlPowerPdf pdf(reference_wave());
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double t = 5.0 * pdf.wave().period * i / 100.0;
        const auto branch = [&](double s) { return pdf.eval(std::clamp(s, 1e-300, 1.0 - 1e-15), t); };
        worst = std::max(worst, std::abs(support::simpson(branch, 0.0, 1.0, 4000) + pdf.atom(t) - 1.0));
    }
    return {worst <= tol::kDensityMass, fmt("101 times over [0, 5T], max |mass-1| %.3g (tol %.0e)", worst, tol::kDensityMass)};
}

TimeSeries reference_samples(double noise_sd, std::uint64_t seed) {
    const auto w = reference_wave();
    TimeSeries s;
    Rng rng(seed);
    for (int t = 0; t < 26; ++t) {
        s.t.push_back(t);
        s.y.push_back(support::fourier(w.a0, w.a1, w.b1, w.period, t) + (noise_sd > 0 ? noise_sd * rng.normal() : 0.0));
    }
    return s;
}

Outcome fourier_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = reference_wave();
    const auto clean = fit_fourier1(reference_samples(0.0, 0));
    const double period_err = std::abs(clean.params.period / w.period - 1.0);
    const double coef_err = std::max({std::abs(clean.params.a0 - w.a0), std::abs(clean.params.a1 - w.a1),
                                      std::abs(clean.params.b1 - w.b1)});
    int ok = 0;
    const int seeds = 100;
    for (int seed = 1; seed <= seeds; ++seed) {
        const auto fit = fit_fourier1(reference_samples(0.02, static_cast<std::uint64_t>(seed)));
        ok += !fit.degenerate && std::abs(fit.params.period / w.period - 1.0) <= tol::kNoisyPeriodRel;
    }
    const double rate = static_cast<double>(ok) / seeds;
    const double secs = seconds_since(t0);
    const bool pass = !clean.degenerate && period_err <= tol::kCleanPeriodRel && coef_err <= tol::kCleanCoef &&
                      rate >= tol::kNoisySuccess && secs < tol::kFitRuntimeSec;
    return {pass, fmt("clean: T err %.2g%%, coef err %.2g; noisy: %d/%d within 5%% (need %.0f%%); %.2f s", 100 * period_err,
                      coef_err, ok, seeds, 100 * tol::kNoisySuccess, secs)};
}

Outcome pipeline_recovery() {
    const auto draws = synth_outcomes(outcome_synth_config(2024, 1.5, 500, 26));
    const auto report = run_pipeline(draws, GroupKey{}, PipelineConfig{}, {"synth:outcomes", "", 2024, ""});
    const auto& fit = report.groups.front().r_spi_1;
    if (!fit || !fit->extrema) return {false, "r_spi_1 series was not fitted"};
    const double T = fit->fit.params.period;
    const auto [hi, lo] = *fit->extrema;
    const bool ok = std::abs(T / 18.0 - 1.0) <= tol::kPipelinePeriodRel && std::abs(hi - 2.0 / 3.0) <= tol::kPipelineExtrema &&
                    std::abs(lo - 0.5) <= tol::kPipelineExtrema;
    return {ok, fmt("T = %.3f (18 +/- 10%%), max = %.4f, min = %.4f (2/3, 1/2 +/- %.2f)", T, hi, lo, tol::kPipelineExtrema)};
}

// One group of `firms` firms per year, 26 years from 1996, with the yearly
// top-1 and top-2..10 means following the given curves.
template <class Top1, class Rest>
SynthConfig curve_registry(std::uint64_t seed, int firms, Top1 top1, Rest rest) {
    SynthConfig c;
    c.seed = seed;
    GroupTargets g;
    for (int i = 0; i < 26; ++i) g.years.push_back({1996 + i, firms, {top1(i), 0.05}, {rest(i), 0.05}});
    c.groups.push_back(std::move(g));
    return c;
}

Outcome prediction_diagnostics() {
    const double T = 18.0, w = 2.0 * M_PI / T;
    // m_top1 = A cos(wt + pi); m_top2_10 follows (AB/2)[cos(2wt + pi) - 1] around a level.
    const OscillationModel model{0.04, 1.5, T};
    const auto first = curve_registry(
        91, 3000, [&](int t) { return 0.30 + oscillation_curves(model, t).top1_share; },
        [&](int t) { return 0.26 + oscillation_curves(model, t).others_share; });
    const auto r1 = run_pipeline(synth_registry(first), PipelineConfig{}, {});
    const auto& d1 = r1.groups.front().diagnostics;

    const auto second = curve_registry(
        92, 3000, [](int) { return 0.30; }, [&](int t) { return 0.25 + 0.05 * std::cos(w * t); });
    const auto r2 = run_pipeline(synth_registry(second), PipelineConfig{}, {});
    const auto& d2 = r2.groups.front().diagnostics;

    if (!d1.period_ratio || !d2.phase_difference) return {false, "diagnostics unavailable (degenerate fit)"};
    const bool ok = std::abs(*d1.period_ratio - 0.5) <= tol::kPeriodRatioRel * 0.5 &&
                    std::abs(*d2.phase_difference - M_PI) <= tol::kPhaseRad;
    return {ok, fmt("period ratio %.4f (0.5 +/- 5%%), phase difference %.4f rad (pi +/- %.1f)", *d1.period_ratio,
                    *d2.phase_difference, tol::kPhaseRad)};
}

Outcome p_value_cells() {
    const double a = p_from_r(-0.545, 26), b = p_from_r(-0.435, 26), c = p_from_r(0.214, 26);
    const bool ok = std::abs(a - 0.004) <= 0.001 && std::abs(b - 0.026) <= 0.002 && std::abs(c - 0.294) <= 0.01;
    return {ok, fmt("p(-0.545)=%.5f [0.004+/-0.001], p(-0.435)=%.5f [0.026+/-0.002], p(0.214)=%.5f [0.294+/-0.01]", a, b, c)};
}

Outcome normal_fit_fidelity() {
    const ControlPowerPdf pdf(WaveParams{0.0, 0.0, 0.0, 18.0});
    const auto draws = pdf.sample(0.0, 466165, 10000);
    const auto f = fit_normal(draws);
    const bool ok = std::abs(f.mu - 0.466) <= tol::kNormalMoments && std::abs(f.sigma - 0.165) <= tol::kNormalMoments &&
                    std::abs(f.band_ratio - tol::kOneSigmaMass) <= tol::kBandRatio;
    return {ok, fmt("n=%zu: mu %.4f, sigma %.4f (+/- %.2f), band %.4f vs %.4f (+/- %.2f)", f.n, f.mu, f.sigma,
                    tol::kNormalMoments, f.band_ratio, tol::kOneSigmaMass, tol::kBandRatio)};
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string emitted_bytes(const Report& report, const fs::path& dir) {
    fs::remove_all(dir);
    std::string all;
    for (const auto& f : emit_report(report, ReportFormat::all, dir)) all += f + "\n" + read_bytes(dir / f);
    fs::remove_all(dir);
    return all;
}

Outcome determinism() {
    const auto dir = fs::temp_directory_path() / "ctrlpower_acceptance_determinism";
    const Provenance prov{"synth:default", "", 7, ""};
    std::string reference;
    int runs = 0, mismatches = 0;
    auto check = [&](const PipelineConfig& c) {
        const auto report = run_pipeline(synth_registry(default_synth_config(7)), c, prov);
        const auto bytes = report_json_text(report) + emitted_bytes(report, dir);
        if (reference.empty()) reference = bytes;
        mismatches += bytes != reference;
        ++runs;
    };
    for (int threads : {0, 0, 1, 2, 4, 8}) {
        PipelineConfig c;
        c.stats.threads = threads;
        check(c);
    }
    PipelineConfig serial;
    serial.stats.parallel = false;
    serial.fourier.parallel = false;
    check(serial);

    const auto outcomes = synth_outcomes(outcome_synth_config(7));
    const auto a = report_json_text(run_pipeline(outcomes, GroupKey{}, PipelineConfig{}, prov));
    const auto b = report_json_text(run_pipeline(synth_outcomes(outcome_synth_config(7)), GroupKey{}, PipelineConfig{}, prov));
    mismatches += a != b;
    return {mismatches == 0, fmt("%d registry runs (threads 0,0,1,2,4,8 and serial) + 2 outcome runs, %d byte mismatches, "
                                 "%zu bytes per run",
                                 runs, mismatches, reference.size())};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"SPI oracle equivalence", spi_oracle_equivalence},
        {"SPI axioms", spi_axioms},
        {"Fibonacci sequence", fibonacci_sequence},
        {"Hypothesis wave", hypothesis_wave_exact},
        {"Wave-equation residual", wave_equation},
        {"Density normalization", density_normalization},
        {"Fourier recovery", fourier_recovery},
        {"End-to-end pipeline recovery", pipeline_recovery},
        {"Prediction diagnostics", prediction_diagnostics},
        {"p-value cross-checks", p_value_cells},
        {"Normal-fit fidelity", normal_fit_fidelity},
        {"Determinism", determinism},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << o.detail << std::endl;
    }
    std::cout << (std::size(criteria) - failed) << "/" << std::size(criteria) << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
