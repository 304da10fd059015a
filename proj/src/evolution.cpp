#include "ctrlpower/evolution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ctrlpower/random.hpp"

namespace ctrlpower {

namespace {

struct Mat2 {
    std::uint64_t a, b, c, d;
    Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

} // namespace

FibVector fib_iterate(unsigned n) {
    if (n > kMaxFibIterations)
        throw std::out_of_range("fib_iterate: n above " + std::to_string(kMaxFibIterations));
    Mat2 result{1, 0, 0, 1};
    Mat2 base{1, 1, 1, 0};
    for (unsigned e = n; e != 0; e >>= 1) {
        if (e & 1u) result = result * base;
        if (e > 1) base = base * base;
    }
    return {result.a + result.b, result.c + result.d};
}

std::vector<Ratio> ratio_sequence(unsigned k) {
    if (k == 0) throw std::invalid_argument("ratio_sequence: k must be positive");
    if (k > kMaxFibIterations) throw std::invalid_argument("ratio_sequence: k out of range");
    std::vector<Ratio> out;
    out.reserve(k);
    for (unsigned j = 0; j < k; ++j) {
        const FibVector f = fib_iterate(j);
        out.emplace_back(static_cast<std::int64_t>(f.leading),
                         static_cast<std::int64_t>(f.leading + f.trailing));
    }
    return out;
}

double golden_limit() { return (std::sqrt(5.0) - 1.0) / 2.0; }

InterruptionLaw::InterruptionLaw(std::array<double, 4> weights) : weights_(weights) {
    double sum = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("interruption law weights must be finite and non-negative");
        sum += w;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("interruption law needs a positive weight");
}

InterruptionLaw InterruptionLaw::fixed(unsigned length) {
    if (length < 1 || length > 4) throw std::invalid_argument("episode length must be in 1..4");
    std::array<double, 4> w{};
    w[length - 1] = 1.0;
    return InterruptionLaw(w);
}

CollapseWalk collapse_walk(std::uint64_t seed, unsigned n_operations, const InterruptionLaw& law) {
    if (n_operations == 0) throw std::invalid_argument("collapse_walk: n_operations must be positive");
    const auto ladder = ratio_sequence(5);
    const auto& w = law.weights();
    const double total = w[0] + w[1] + w[2] + w[3];

    Rng rng(seed);
    CollapseWalk walk;
    unsigned remaining = n_operations;
    while (remaining > 0) {
        const double u = rng.uniform() * total;
        unsigned length = 4;
        double acc = 0.0;
        for (unsigned i = 0; i < 4; ++i) {
            acc += w[i];
            if (u < acc && w[i] > 0.0) {
                length = i + 1;
                break;
            }
        }
        // Guard against rounding leaving u at the top of the last bucket.
        while (w[length - 1] == 0.0) --length;
        if (length > remaining) length = remaining;
        walk.episodes.push_back(length);
        for (unsigned s = 0; s <= length; ++s) walk.states.push_back(ladder[s]);
        remaining -= length;
    }
    return walk;
}

double WaveParams::amplitude() const { return std::hypot(a1, b1); }

WaveParams reference_wave() { return {0.553, 0.060, -0.083, 17.357}; }

HypothesisWave hypothesis_wave(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("hypothesis_wave: h must be positive");
    HypothesisWave hw;
    hw.params = {7.0 / 12.0, 0.0, 1.0 / 12.0, 12.0 * h};
    return hw;
}

double wave_eval(const WaveParams& p, double t) {
    const double phase = kTwoPi * t / p.period;
    return p.a0 + p.a1 * std::cos(phase) + p.b1 * std::sin(phase);
}

double wave_d2t(const WaveParams& p, double t) {
    const double k = kTwoPi / p.period;
    const double phase = k * t;
    return -k * k * (p.a1 * std::cos(phase) + p.b1 * std::sin(phase));
}

double wave_equation_residual(const WaveParams& params, double h, double t, double l_period) {
    if (!(h > 0.0)) throw std::invalid_argument("wave_equation_residual: h must be positive");
    if (!(l_period > 0.0)) throw std::invalid_argument("wave_equation_residual: l-period must be positive");
    WaveParams over_l = params;
    over_l.period = l_period;
    return wave_d2t(params, t) - wave_d2t(over_l, t / h) / (h * h);
}

double wave_equation_residual(const WaveParams& params, double h, double t) {
    if (!(h > 0.0)) throw std::invalid_argument("wave_equation_residual: h must be positive");
    return wave_equation_residual(params, h, t, params.period / h);
}

ControlPowerPdf::ControlPowerPdf(WaveParams wave, double mu, double sigma)
    : wave_(wave), mu_(mu), sigma_(sigma) {
    if (!(wave_.period > 0.0)) throw std::invalid_argument("wave period must be positive");
    if (!(sigma_ > 0.0)) throw std::invalid_argument("normal branch sigma must be positive");
    const double amp = wave_.amplitude();
    if (wave_.a0 - amp < -1e-12 || wave_.a0 + amp > 1.0 + 1e-12)
        throw std::invalid_argument("atom mass must stay within [0, 1]");
    normal_mass_ = normal_cdf((1.0 - mu_) / sigma_) - normal_cdf((0.0 - mu_) / sigma_);
}

double ControlPowerPdf::eval(double spi, double t) const {
    if (!(spi > 0.0 && spi <= 1.0)) throw std::domain_error("control power must lie in (0, 1]");
    const double a = atom(t);
    if (spi == 1.0) return a;
    const double z = (spi - mu_) / sigma_;
    const double density = std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(kTwoPi));
    return (1.0 - a) * density / normal_mass_;
}

std::vector<double> ControlPowerPdf::sample(double t, std::uint64_t seed, std::size_t n) const {
    if (n == 0) throw std::invalid_argument("sample size must be positive");
    const double a = atom(t);
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < a)
            out.push_back(1.0);
        else
            out.push_back(rng.truncated_normal(mu_, sigma_, 0.0, 1.0));
    }
    return out;
}

OscillationPoint oscillation_curves(const OscillationModel& m, double t) {
    if (!(m.share_amplitude > 0.0 && m.effort_amplitude > 0.0 && m.period > 0.0))
        throw std::invalid_argument("oscillation model parameters must be positive");
    const double phase = kTwoPi * t / m.period;
    const double ab = m.share_amplitude * m.effort_amplitude;
    return {m.share_amplitude * std::cos(phase + std::numbers::pi), m.effort_amplitude * std::cos(phase),
            ab / 2.0 * (std::cos(kTwoPi * t / (m.period / 2.0) + std::numbers::pi) - 1.0)};
}

} // namespace ctrlpower
