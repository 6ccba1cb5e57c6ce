#include "sdde/linstab.hpp"

#include "sdde/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace sdde {

namespace {

void validate(const Linearization& lin) {
    if (!(lin.a >= 0.0) || !std::isfinite(lin.a)) throw InvalidParameter("a must be >= 0");
    if (!(lin.b < 0.0) || !std::isfinite(lin.b)) throw InvalidParameter("b = f'(K) must be negative");
    if (!(lin.tau > 0.0) || !std::isfinite(lin.tau)) throw InvalidParameter("tau must be positive");
}

constexpr double kOnContour = 1e-12;
constexpr int kInitialSamples = 4096;
constexpr int kMaxDepth = 40;

struct ContourHit {};

// Accumulated arg change of chi along the segment z0 -> z1, refined until each
// increment is below pi/2.
double arg_change(const Linearization& lin, std::complex<double> z0, std::complex<double> c0,
                  std::complex<double> z1, std::complex<double> c1, int depth) {
    const double d = std::arg(c1 / c0);
    if (std::abs(d) < std::numbers::pi / 2.0 || depth >= kMaxDepth) return d;
    const std::complex<double> zm = 0.5 * (z0 + z1);
    const std::complex<double> cm = characteristic(lin, zm);
    if (std::abs(cm) < kOnContour) throw ContourHit{};
    return arg_change(lin, z0, c0, zm, cm, depth + 1) + arg_change(lin, zm, cm, z1, c1, depth + 1);
}

double winding(const Linearization& lin, double eps, double side) {
    const std::complex<double> corners[] = {{eps, eps}, {side, eps}, {side, side}, {eps, side}};
    constexpr int kPerEdge = kInitialSamples / 4;
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const std::complex<double> from = corners[e];
        const std::complex<double> to = corners[(e + 1) % 4];
        std::complex<double> z_prev = from;
        std::complex<double> c_prev = characteristic(lin, from);
        if (std::abs(c_prev) < kOnContour) throw ContourHit{};
        for (int i = 1; i <= kPerEdge; ++i) {
            const std::complex<double> z = from + (to - from) * (static_cast<double>(i) / kPerEdge);
            const std::complex<double> c = characteristic(lin, z);
            if (std::abs(c) < kOnContour) throw ContourHit{};
            total += arg_change(lin, z_prev, c_prev, z, c, 0);
            z_prev = z;
            c_prev = c;
        }
    }
    return total;
}

} // namespace

std::complex<double> characteristic(const Linearization& lin, std::complex<double> lambda) {
    return lambda + lin.a - lin.b * std::exp(-lambda * lin.tau);
}

std::optional<double> critical_delay(double a, double b) {
    if (!(b < 0.0)) throw InvalidParameter("critical_delay requires b < 0");
    if (!(a >= 0.0)) throw InvalidParameter("critical_delay requires a >= 0");
    if (std::abs(b) <= a) return std::nullopt;
    return std::acos(a / b) / std::sqrt(b * b - a * a);
}

int count_unstable_pairs(const Linearization& lin) {
    validate(lin);
    const double scale = lin.a + std::abs(lin.b);
    const double eps = 1e-6 * scale;
    const double side = scale + 1.0;
    for (double shift : {0.0, 1e-6}) {
        try {
            const double w = winding(lin, eps + shift, side + shift);
            return static_cast<int>(std::lround(w / (2.0 * std::numbers::pi)));
        } catch (const ContourHit&) {
            // perturb the contour once
        }
    }
    throw ContourRootError("characteristic root on the counting contour");
}

StabilityResult analyze_stability(const Linearization& lin) {
    validate(lin);
    StabilityResult r;
    r.tau0 = critical_delay(lin.a, lin.b);
    r.unstable_pairs = count_unstable_pairs(lin);
    r.locally_stable = r.unstable_pairs == 0 && (!r.tau0 || lin.tau < *r.tau0);
    return r;
}

} // namespace sdde
