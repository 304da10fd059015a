#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ctrlpower/evolution.hpp"

namespace ctrlpower {

/// Ordered (t, y) samples; t in years, strictly increasing.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> y;

    std::size_t size() const { return t.size(); }
    /// Throws std::invalid_argument on length mismatch, non-finite values or
    /// non-increasing t.
    void validate() const;
};

struct PeriodRange {
    double lo = 4.0;
    double hi = 0.0;
};

struct FourierOptions {
    /// Defaults to [4, 2 * time span].
    std::optional<PeriodRange> period_range;
    double grid_step = 0.05;
    /// Run the period scan through the OpenMP kernel.
    bool parallel = true;
};

/// Amplitudes below this are reported as degenerate.
inline constexpr double kDegenerateAmplitude = 1e-9;

struct FourierFit {
    WaveParams params;   ///< period is NaN when degenerate
    double sse = 0.0;
    double rmse = 0.0;
    double r_squared = 0.0;
    bool degenerate = false;
};

/// Least-squares coefficients and sse for a fixed period.
struct FixedPeriodFit {
    double a0 = 0.0, a1 = 0.0, b1 = 0.0;
    double sse = 0.0;
};

FixedPeriodFit fit_at_period(const TimeSeries& series, double period);

/// y ≈ a0 + a1 cos(2πt/T) + b1 sin(2πt/T) with T unknown.
///
/// The coefficients for a given T come from a 3-column linear least-squares
/// solve. T is scanned on a grid of `grid_step` over the period range, the
/// best grid point is refined by golden-section search within one step on
/// either side, and the smaller sse wins. Equal sse resolves to the smaller T.
/// Throws std::invalid_argument for fewer than 4 points, an empty period
/// range or a non-positive grid step.
FourierFit fit_fourier1(const TimeSeries& series, const FourierOptions& options = {});

/// (a0 + amplitude, a0 - amplitude). Throws std::domain_error for a
/// degenerate fit.
std::pair<double, double> fourier_extrema(const FourierFit& fit);
std::pair<double, double> fourier_extrema(const WaveParams& params);

struct NormalFit {
    double mu = 0.0;
    double sigma = 0.0;      ///< n - 1 denominator
    double band_ratio = 0.0; ///< share of samples in [mu - sigma, mu + sigma]
    std::size_t n = 0;
};

/// Throws std::invalid_argument for fewer than 2 samples.
NormalFit fit_normal(std::span<const double> samples);

struct CorrelationResult {
    double r = 0.0;
    double p_value = 1.0; ///< two-sided
    std::size_t n = 0;
};

/// Product-moment correlation with a t-test p-value. Throws
/// std::invalid_argument on length mismatch, n < 3 or a constant input.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of a sample correlation r over n pairs (df = n - 2).
/// Returns 0 for |r| >= 1. Throws std::invalid_argument for n < 3.
double p_from_r(double r, std::size_t n);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// Regularised incomplete beta I_x(a, b), continued fraction evaluated to a
/// relative tolerance of 1e-10.
double incomplete_beta(double a, double b, double x);

} // namespace ctrlpower
