#pragma once

#include <numeric>
#include <cstdint>

#include "rml/errors.hpp"

namespace rml {

/// Exact rational value, kept in lowest terms with positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) throw domain_error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw domain_error("Rational: division by zero");
        return {num * o.den, den * o.num};
    }
};

/// Critical Lebesgue exponent (2d-2)/(d+1) below which the multiplier
/// characterization operates.
inline Rational p_crit(int d) {
    if (d < 2) throw domain_error("p_crit: dimension must be >= 2");
    return {2 * d - 2, d + 1};
}

/// Critical exponent 2 + 4/(d-3) for the time-averaged wave estimates (d >= 4).
inline Rational q_crit(int d) {
    if (d < 4) throw domain_error("q_crit: dimension must be >= 4");
    return Rational{2, 1} + Rational{4, d - 3};
}

/// Regularity exponent d(1/2 - 1/q) - 1/2 for the smoothing inequality.
inline Rational smoothing_alpha(const Rational& q, int d) {
    if (d < 2) throw domain_error("smoothing_alpha: dimension must be >= 2");
    return Rational{d, 1} * (Rational{1, 2} - Rational{q.den, q.num}) - Rational{1, 2};
}

inline double p_crit_value(int d) { return p_crit(d).value(); }
inline double q_crit_value(int d) { return q_crit(d).value(); }
inline double smoothing_alpha_value(double q, int d) { return d * (0.5 - 1.0 / q) - 0.5; }

} // namespace rml
