#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ctrlpower/rational.hpp"

namespace ctrlpower {

/// (F(n+1), F(n)) pair produced by the Fibonacci iteration matrix.
struct FibVector {
    std::uint64_t leading = 1;
    std::uint64_t trailing = 1;
    friend bool operator==(const FibVector&, const FibVector&) = default;
};

/// Largest exponent whose result fits in 64 bits.
inline constexpr unsigned kMaxFibIterations = 90;

/// [[1,1],[1,0]]^n applied to (1,1), by repeated squaring.
FibVector fib_iterate(unsigned n);

/// First k probability states 1/2, 2/3, 3/5, 5/8, ... of the evolution.
/// Throws std::invalid_argument for k == 0 or k > kMaxFibIterations.
std::vector<Ratio> ratio_sequence(unsigned k);

/// (sqrt(5) - 1) / 2, the limit of ratio_sequence.
double golden_limit();

/// Distribution of the climb length of one episode over {1, 2, 3, 4}.
class InterruptionLaw {
public:
    /// Relative weights for run lengths 1..4; must be non-negative with a
    /// positive sum.
    explicit InterruptionLaw(std::array<double, 4> weights);

    static InterruptionLaw uniform() { return InterruptionLaw({1, 1, 1, 1}); }
    /// Every episode climbs exactly `length` steps.
    static InterruptionLaw fixed(unsigned length);

    const std::array<double, 4>& weights() const { return weights_; }

private:
    std::array<double, 4> weights_;
};

/// Result of a collapse walk. `episodes` holds the drawn run lengths and
/// `states` the concatenated states; an episode of length L contributes
/// 1/2 followed by the next L states of the ladder.
struct CollapseWalk {
    std::vector<unsigned> episodes;
    std::vector<Ratio> states;
};

/// Evolution interrupted at random and collapsed back to 1/2.
///
/// Episodes are drawn until `n_operations` climbing operations have been
/// performed; the final episode is cut short if it would exceed that budget.
CollapseWalk collapse_walk(std::uint64_t seed, unsigned n_operations,
                           const InterruptionLaw& law = InterruptionLaw::uniform());

/// First-order Fourier wave a0 + a1 cos(2πt/T) + b1 sin(2πt/T).
struct WaveParams {
    double a0 = 0.0;
    double a1 = 0.0;
    double b1 = 0.0;
    double period = 1.0;

    double amplitude() const;
};

/// Coefficients of the fitted R_{SPI=1} wave with t = 0 at the first sample year.
WaveParams reference_wave();

/// Exact description of the hypothesised wave between 1/2 and 2/3.
struct HypothesisWave {
    WaveParams params; ///< a0 = 7/12, a1 = 0, b1 = 1/12, period 12h
    Ratio mean{7, 12};
    Ratio amplitude{1, 12};
    Ratio maximum() const { return mean + amplitude; }
    Ratio minimum() const { return mean - amplitude; }
};

/// Wave with maximum 2/3, minimum 1/2 and period 12h, starting at its mean
/// on the way up. Throws std::invalid_argument for h <= 0.
HypothesisWave hypothesis_wave(double h);

double wave_eval(const WaveParams& params, double t);

/// Analytic second derivative in t.
double wave_d2t(const WaveParams& params, double t);

/// Evolution clock t = h * l.
struct EvolutionClock {
    double h = 1.5;
    std::uint64_t l = 0;
    double t() const { return h * static_cast<double>(l); }
};

/// d²R/dt² - (1/h²) d²R/dl² where R is written once over t with period
/// params.period and once over l = t/h with period `l_period`.
/// Throws std::invalid_argument for h <= 0 or l_period <= 0.
double wave_equation_residual(const WaveParams& params, double h, double t, double l_period);

/// Same, with the l-period constructed as params.period / h.
double wave_equation_residual(const WaveParams& params, double h, double t);

/// Mixture of an atom at SPI = 1 whose mass follows `wave`, and a normal
/// branch renormalised to (0, 1).
class ControlPowerPdf {
public:
    /// Throws std::invalid_argument if the wave can leave [0, 1] or
    /// sigma <= 0.
    ControlPowerPdf(WaveParams wave, double mu = 0.466, double sigma = 0.165);

    const WaveParams& wave() const { return wave_; }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }

    double atom(double t) const { return wave_eval(wave_, t); }
    /// Mass of the untruncated normal on (0, 1).
    double normal_mass() const { return normal_mass_; }

    /// Atom mass at spi = 1, density on (0, 1). Throws std::domain_error
    /// outside (0, 1].
    double eval(double spi, double t) const;

    /// n draws: 1.0 with probability atom(t), else truncated normal.
    std::vector<double> sample(double t, std::uint64_t seed, std::size_t n) const;

private:
    WaveParams wave_;
    double mu_;
    double sigma_;
    double normal_mass_;
};

inline double pdf_eval(const ControlPowerPdf& pdf, double spi, double t) { return pdf.eval(spi, t); }
inline std::vector<double> pdf_sample(const ControlPowerPdf& pdf, double t, std::uint64_t seed,
                                      std::size_t n) {
    return pdf.sample(t, seed, n);
}

/// Share-rate / effort oscillation; all three parameters must be positive.
struct OscillationModel {
    double share_amplitude = 1.0;  ///< A
    double effort_amplitude = 1.0; ///< B
    double period = 18.0;          ///< T, years
};

struct OscillationPoint {
    double top1_share;   ///< A cos(2πt/T + π)
    double effort;       ///< B cos(2πt/T)
    double others_share; ///< (AB/2)[cos(2πt/(T/2) + π) - 1]
};

OscillationPoint oscillation_curves(const OscillationModel& model, double t);

} // namespace ctrlpower
