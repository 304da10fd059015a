#pragma once

// Hand-rolled generators and independent reference computations shared by
// the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace support {

using Engine = std::mt19937_64;

inline std::vector<std::int64_t> random_int_weights(Engine& eng, std::size_t n, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> d(0, hi);
    std::vector<std::int64_t> w(n);
    do {
        for (auto& x : w) x = d(eng);
    } while (std::accumulate(w.begin(), w.end(), std::int64_t{0}) == 0);
    return w;
}

inline std::vector<double> as_double(const std::vector<std::int64_t>& w, double scale = 1.0) {
    std::vector<double> out;
    out.reserve(w.size());
    for (auto x : w) out.push_back(static_cast<double>(x) * scale);
    return out;
}

// True when some coalition weighs exactly half the total.
inline bool has_exact_tie(const std::vector<std::int64_t>& w) {
    const std::int64_t total = std::accumulate(w.begin(), w.end(), std::int64_t{0});
    for (std::uint32_t mask = 0; mask < (1u << w.size()); ++mask) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (mask >> i & 1u) s += w[i];
        if (2 * s == total) return true;
    }
    return false;
}

// Pivot counts over all orderings, in integer arithmetic. Written from the
// definition: the pivot is the first player whose arrival makes the running
// weight exceed half the total.
inline std::vector<std::uint64_t> brute_force_pivots(const std::vector<std::int64_t>& w) {
    const std::int64_t total = std::accumulate(w.begin(), w.end(), std::int64_t{0});
    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::uint64_t> pivots(w.size(), 0);
    do {
        std::int64_t run = 0;
        for (std::size_t p : order) {
            run += w[p];
            if (2 * run > total) {
                ++pivots[p];
                break;
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return pivots;
}

inline std::vector<double> brute_force_spi(const std::vector<std::int64_t>& w) {
    const auto pivots = brute_force_pivots(w);
    double orderings = 1.0;
    for (std::size_t k = 2; k <= w.size(); ++k) orderings *= static_cast<double>(k);
    std::vector<double> out;
    for (auto p : pivots) out.push_back(static_cast<double>(p) / orderings);
    return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Composite Simpson rule over [a, b] with an even number of panels.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// First-order Fourier value, evaluated independently of the library.
inline double fourier(double a0, double a1, double b1, double period, double t) {
    const double w = 2.0 * M_PI / period;
    return a0 + a1 * std::cos(w * t) + b1 * std::sin(w * t);
}

} // namespace support
