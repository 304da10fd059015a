#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ctrlpower {

/// Reduced fraction with a positive denominator.
class Ratio {
public:
    constexpr Ratio() = default;
    constexpr Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw std::invalid_argument("Ratio: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }
    constexpr double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend constexpr Ratio operator+(Ratio a, Ratio b) {
        const std::int64_t g = std::gcd(a.den_, b.den_);
        return {a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_};
    }
    friend constexpr Ratio operator-(Ratio a, Ratio b) { return a + Ratio(-b.num_, b.den_); }
    friend constexpr Ratio operator*(Ratio a, Ratio b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
    friend constexpr bool operator==(Ratio a, Ratio b) = default;

    friend std::ostream& operator<<(std::ostream& os, Ratio r) { return os << r.num_ << '/' << r.den_; }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace ctrlpower
