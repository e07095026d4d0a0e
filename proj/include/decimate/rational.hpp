#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "error.hpp"

namespace decimate {

/// Exact fraction with positive denominator, always in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        require(den != 0, "rational with zero denominator");
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

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        require(b.num_ != 0, "rational division by zero");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::int64_t pow3(int n) {
    require(n >= 0 && n <= 38, "power of three out of range");
    std::int64_t r = 1;
    for (int i = 0; i < n; ++i) r *= 3;
    return r;
}

// If den is a power of three returns its exponent, otherwise -1.
inline int triadic_exponent(std::int64_t den) {
    int n = 0;
    while (den > 1 && den % 3 == 0) {
        den /= 3;
        ++n;
    }
    return den == 1 ? n : -1;
}

} // namespace decimate
