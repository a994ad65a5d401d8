#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "natcurve/error.hpp"

namespace natcurve {

/// Reduced fraction num/den with den > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    [[nodiscard]] std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

namespace detail {

using u128 = unsigned __int128;

inline u128 isqrt(u128 x) {
    if (x < 2) return x;
    u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

inline std::optional<std::int64_t> exact_sqrt(u128 x) {
    const u128 r = isqrt(x);
    if (r * r != x || r > static_cast<u128>(INT64_MAX)) return std::nullopt;
    return static_cast<std::int64_t>(r);
}

} // namespace detail

/// sqrt(a^2 + b^2) when it is rational. Components are limited to |num|, den < 2^31
/// so the sums of squares fit in 128 bits.
inline std::optional<Rational> rational_hypot(const Rational& a, const Rational& b) {
    constexpr std::int64_t limit = std::int64_t{1} << 31;
    for (const Rational* r : {&a, &b}) {
        if (r->num >= limit || r->num <= -limit || r->den >= limit) {
            throw Error(ErrorCode::InvalidArgument, "rational component exceeds 2^31");
        }
    }
    using detail::u128;
    const auto an = static_cast<u128>(a.num < 0 ? -a.num : a.num);
    const auto bn = static_cast<u128>(b.num < 0 ? -b.num : b.num);
    const auto ad = static_cast<u128>(a.den);
    const auto bd = static_cast<u128>(b.den);
    // a^2 + b^2 = (an^2 bd^2 + bn^2 ad^2) / (ad^2 bd^2); den is a perfect square already.
    const u128 num = an * an * bd * bd + bn * bn * ad * ad;
    const auto root = detail::exact_sqrt(num);
    if (!root) return std::nullopt;
    return Rational(*root, static_cast<std::int64_t>(ad * bd));
}

/// Continued-fraction search for p/q with q <= max_den and |x - p/q| <= window.
inline std::optional<Rational> rational_approximation(double x, std::int64_t max_den = 1'000'000,
                                                      double window = 1e-12) {
    if (!std::isfinite(x)) return std::nullopt;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(r);
        if (std::fabs(a) > 9e15) break;
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t p2 = ai * p1 + p0;
        const std::int64_t q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        if (std::fabs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= window) return Rational(p2, q2);
        const double frac = r - a;
        if (frac == 0.0) break;
        r = 1.0 / frac;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return std::nullopt;
}

/// Exact rational for doubles holding integers below 2^31.
inline std::optional<Rational> exact_integer(double x) {
    if (std::nearbyint(x) == x && std::fabs(x) < 2147483648.0) return Rational(static_cast<std::int64_t>(x));
    return std::nullopt;
}

} // namespace natcurve
