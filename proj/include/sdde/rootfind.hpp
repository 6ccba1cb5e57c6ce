#pragma once

#include "sdde/errors.hpp"

#include <cmath>
#include <string>

namespace sdde {

struct RootOptions {
    double abs_tol = 1e-13;
    int max_newton = 5;
};

/// Root of g on [lo, hi] given a sign change: bisection down to abs_tol, then
/// at most `max_newton` Newton steps, each kept only if it stays inside the
/// final bracket and does not increase |g|.
template <class G, class DG>
double bisect_newton(G&& g, DG&& dg, double lo, double hi, RootOptions opt = {}) {
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (!std::isfinite(glo) || !std::isfinite(ghi) || (glo > 0.0) == (ghi > 0.0))
        throw NoSignChange("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

    while (hi - lo > opt.abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }

    double x = std::abs(glo) < std::abs(g(hi)) ? lo : hi;
    double gx = g(x);
    for (int k = 0; k < opt.max_newton && gx != 0.0; ++k) {
        const double d = dg(x);
        if (!(std::abs(d) > 0.0) || !std::isfinite(d)) break;
        const double next = x - gx / d;
        if (!(next >= lo - opt.abs_tol && next <= hi + opt.abs_tol)) break;
        const double gn = g(next);
        if (!(std::abs(gn) <= std::abs(gx))) break;
        if (next == x) break;
        x = next;
        gx = gn;
    }
    return x;
}

/// Bisection only, for functions without a usable derivative.
template <class G>
double bisect(G&& g, double lo, double hi, double abs_tol = 1e-13) {
    return bisect_newton(g, [](double) { return 0.0; }, lo, hi, {abs_tol, 0});
}

} // namespace sdde
