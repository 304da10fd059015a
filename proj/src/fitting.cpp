#include "ctrlpower/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "ctrlpower/kernels.hpp"

namespace ctrlpower {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498949; // (sqrt(5) - 1) / 2

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Minimises f on [lo, hi] by golden-section search.
template <class F>
double golden_section(F&& f, double lo, double hi, double tol) {
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int iter = 0; iter < 200 && (hi - lo) > tol; ++iter) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

} // namespace

void TimeSeries::validate() const {
    if (t.size() != y.size()) throw std::invalid_argument("time series: t and y lengths differ");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(y[i]))
            throw std::invalid_argument("time series: non-finite value");
        if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("time series: t must be strictly increasing");
    }
}

FixedPeriodFit fit_at_period(const TimeSeries& series, double period) {
    const auto n = static_cast<Eigen::Index>(series.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double phase = kTwoPi * series.t[i] / period;
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(phase);
        design(i, 2) = std::sin(phase);
        y(i) = series.y[i];
    }
    const Eigen::Vector3d beta = design.colPivHouseholderQr().solve(y);
    FixedPeriodFit fit{beta(0), beta(1), beta(2), (y - design * beta).squaredNorm()};
    return fit;
}

FourierFit fit_fourier1(const TimeSeries& series, const FourierOptions& options) {
    series.validate();
    if (series.size() < 4) throw std::invalid_argument("Fourier fit needs at least 4 points");
    if (!(options.grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");

    const double span = series.t.back() - series.t.front();
    const PeriodRange range = options.period_range.value_or(PeriodRange{4.0, 2.0 * span});
    if (!(range.lo > 0.0) || !(range.hi >= range.lo) || !std::isfinite(range.hi))
        throw std::invalid_argument("empty or invalid period range");

    std::vector<double> periods;
    const auto steps = static_cast<std::size_t>(std::floor((range.hi - range.lo) / options.grid_step + 1e-9));
    periods.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) periods.push_back(range.lo + static_cast<double>(i) * options.grid_step);

    const auto sse = options.parallel ? kernels::period_scan_parallel(series, periods)
                                      : kernels::period_scan_serial(series, periods);
    // First minimum wins, i.e. the smallest period on ties.
    const std::size_t best = static_cast<std::size_t>(std::min_element(sse.begin(), sse.end()) - sse.begin());

    double best_period = periods[best];
    double best_sse = sse[best];
    const double lo = std::max(range.lo, best_period - options.grid_step);
    const double hi = std::min(range.hi, best_period + options.grid_step);
    if (hi > lo) {
        const double refined = golden_section([&](double p) { return fit_at_period(series, p).sse; }, lo, hi,
                                              1e-12 * best_period);
        const double refined_sse = fit_at_period(series, refined).sse;
        if (refined_sse < best_sse) {
            best_period = refined;
            best_sse = refined_sse;
        }
    }

    const FixedPeriodFit coef = fit_at_period(series, best_period);
    const double ybar = mean_of(series.y);
    double sst = 0.0;
    for (double v : series.y) sst += (v - ybar) * (v - ybar);

    FourierFit fit;
    fit.params = {coef.a0, coef.a1, coef.b1, best_period};
    fit.sse = coef.sse;
    if (fit.params.amplitude() < kDegenerateAmplitude) {
        fit.degenerate = true;
        fit.params = {ybar, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN()};
        fit.sse = sst;
    }
    const auto n = static_cast<double>(series.size());
    fit.rmse = std::sqrt(fit.sse / n);
    fit.r_squared = sst > 0.0 ? 1.0 - fit.sse / sst : 1.0;
    return fit;
}

std::pair<double, double> fourier_extrema(const WaveParams& p) {
    const double amp = p.amplitude();
    return {p.a0 + amp, p.a0 - amp};
}

std::pair<double, double> fourier_extrema(const FourierFit& fit) {
    if (fit.degenerate) throw std::domain_error("degenerate fit has no extrema");
    return fourier_extrema(fit.params);
}

NormalFit fit_normal(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("normal fit needs at least 2 samples");
    NormalFit fit;
    fit.n = samples.size();
    fit.mu = mean_of(samples);
    double ss = 0.0;
    for (double v : samples) ss += (v - fit.mu) * (v - fit.mu);
    fit.sigma = std::sqrt(ss / static_cast<double>(fit.n - 1));
    // Closed band; the slack absorbs representation error at the edges.
    const double slack = 1e-12 * std::max(1.0, std::abs(fit.mu) + fit.sigma);
    const double lo = fit.mu - fit.sigma - slack;
    const double hi = fit.mu + fit.sigma + slack;
    const auto inside = std::count_if(samples.begin(), samples.end(), [&](double v) { return v >= lo && v <= hi; });
    fit.band_ratio = static_cast<double>(inside) / static_cast<double>(fit.n);
    return fit;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    // The continued fraction converges fast for x < (a+1)/(a+b+2).
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front) / a;

    // Modified Lentz evaluation.
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-10;
    double f = 1.0, c = 1.0, d = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const int m = i / 2;
        double numerator;
        if (i == 0)
            numerator = 1.0;
        else if (i % 2 == 0)
            numerator = (m * (b - m) * x) / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        else
            numerator = -((a + m) * (a + b + m) * x) / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
        d = 1.0 + numerator * d;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = 1.0 + numerator / c;
        if (std::abs(c) < tiny) c = tiny;
        const double cd = c * d;
        f *= cd;
        if (std::abs(1.0 - cd) < eps) return front * (f - 1.0);
    }
    throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("student_t_two_sided: df must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double p_from_r(double r, std::size_t n) {
    if (n < 3) throw std::invalid_argument("p_from_r: need at least 3 pairs");
    if (std::isnan(r)) throw std::invalid_argument("p_from_r: r is NaN");
    if (std::abs(r) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return student_t_two_sided(t, df);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 pairs");
    const double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: constant input");
    CorrelationResult res;
    res.n = x.size();
    res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    res.p_value = p_from_r(res.r, res.n);
    return res;
}

} // namespace ctrlpower
