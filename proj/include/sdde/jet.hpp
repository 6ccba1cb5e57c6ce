#pragma once

// Third-order forward-mode Taylor jets.
//
// A Jet carries f, f', f'', f''' with respect to one seed variable. Feeding
// Jet::variable(x) through an expression written generically (see the map
// families in maps.cpp) yields exact derivatives up to rounding, which is how
// every built-in map gets its closed-form derivative suite.

#include <cmath>

namespace sdde {

struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    constexpr Jet() = default;
    constexpr Jet(double value) : v(value) {} // NOLINT: constants promote implicitly
    constexpr Jet(double value, double first, double second, double third)
        : v(value), d1(first), d2(second), d3(third) {}

    static constexpr Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }
};

/// Chain rule through a scalar function g given g, g', g'', g''' at u.v.
[[nodiscard]] constexpr Jet compose(const Jet& u, double g0, double g1, double g2, double g3) {
    const double u1 = u.d1;
    const double u2 = u.d2;
    const double u3 = u.d3;
    return {g0, g1 * u1, g2 * u1 * u1 + g1 * u2, g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3};
}

constexpr Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3}; }
constexpr Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3}; }
constexpr Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }

constexpr Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}

[[nodiscard]] constexpr Jet reciprocal(const Jet& a) {
    const double r = 1.0 / a.v;
    return compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

constexpr Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

[[nodiscard]] inline Jet exp(const Jet& a) {
    const double e = std::exp(a.v);
    return compose(a, e, e, e, e);
}

[[nodiscard]] inline Jet log(const Jet& a) {
    const double r = 1.0 / a.v;
    return compose(a, std::log(a.v), r, -r * r, 2.0 * r * r * r);
}

/// x^n for real n. Written with explicit power rules so x = 0 works for n > 3.
[[nodiscard]] inline Jet pow(const Jet& a, double n) {
    const double x = a.v;
    return compose(a, std::pow(x, n), n * std::pow(x, n - 1.0), n * (n - 1.0) * std::pow(x, n - 2.0),
                   n * (n - 1.0) * (n - 2.0) * std::pow(x, n - 3.0));
}

[[nodiscard]] inline Jet tanh(const Jet& a) {
    const double t = std::tanh(a.v);
    const double c = std::cosh(a.v);
    const double s = 1.0 / (c * c); // 1 - t^2 cancels for large |v|
    return compose(a, t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0));
}

[[nodiscard]] inline Jet atan(const Jet& a) {
    const double x = a.v;
    const double q = 1.0 / (1.0 + x * x);
    return compose(a, std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
}

} // namespace sdde
