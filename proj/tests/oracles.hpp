#pragma once

// Independent numerical oracles used by the tests. Nothing here calls into
// the library's own root finders or derivative code.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

inline double d1(const Fn& f, double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }

inline double d2(const Fn& f, double x, double h) { return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h); }

inline double d3(const Fn& f, double x, double h) {
    return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
}

/// Richardson-extrapolated third difference, O(h^4).
inline double d3_richardson(const Fn& f, double x, double h) {
    return (4.0 * d3(f, x, 0.5 * h) - d3(f, x, h)) / 3.0;
}

inline double schwarzian_fd(const Fn& f, double x, double h) {
    const double a = d1(f, x, h);
    const double b = d2(f, x, h);
    const double c = d3(f, x, h);
    return c / a - 1.5 * (b / a) * (b / a);
}

/// Plain bisection to ~1 ulp; g(lo) and g(hi) must differ in sign.
inline double bisect(const Fn& g, double lo, double hi) {
    double glo = g(lo);
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if ((gm > 0) == (glo > 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> uniform(double lo, double hi, int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = u(rng);
    return out;
}

} // namespace oracle
