#pragma once

#include <cstdint>
#include <random>

namespace ctrlpower {

/// Seeded generator used by every sampler in the library.
///
/// Only the raw mt19937_64 stream (fully specified by the standard) is taken
/// from the standard library; the transforms below are implemented here so
/// that draws are identical across standard-library vendors.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open();

    /// Integer uniform on [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via the Marsaglia polar method.
    double normal();
    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    /// Normal(mu, sigma) conditioned on (lo, hi) by rejection.
    double truncated_normal(double mu, double sigma, double lo, double hi);

    /// Gamma(shape, 1) via Marsaglia–Tsang.
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ctrlpower
