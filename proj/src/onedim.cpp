#include "sdde/onedim.hpp"

#include "sdde/errors.hpp"
#include "sdde/rootfind.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sdde {

namespace {

// [A, B] on which the map behaves as an S-map.
Interval s_map_window(const Map& map, const MapClass& cls) {
    if (cls.kind == MapKind::Neither)
        throw ClassificationError(map.name() + " is neither an S-map nor an SU-map");
    try {
        return invariant_attracting_interval(map, cls);
    } catch (const NotApplicable& e) {
        if (cls.kind == MapKind::SUMap) throw NotDecidable(e.what());
        throw;
    }
}

} // namespace

std::string_view case_name(DichotomyCase c) noexcept {
    return c == DichotomyCase::GloballyAttractingFixedPoint ? "GloballyAttractingFixedPoint"
                                                            : "GloballyAttractingTwoCycle";
}

FixedPoint find_fixed_point(const Map& map, Interval bracket) {
    auto g = [&](double x) { return map(x) - x; };
    auto dg = [&](double x) { return map.derivatives(x).f1 - 1.0; };
    const double k = bisect_newton(g, dg, bracket.lo, bracket.hi);
    return {k, map.derivatives(k).f1, std::abs(map(k) - k)};
}

FixedPoint find_fixed_point(const Map& map, const MapClass& cls) {
    if (cls.kind == MapKind::SUMap) {
        // K lies right of x0; the decreasing branch brackets it.
        const double x0 = cls.critical_point.value();
        return find_fixed_point(map, {x0, std::max(cls.probe.hi, map(x0))});
    }
    return find_fixed_point(map, s_map_window(map, cls));
}

std::optional<TwoCycle> find_two_cycle(const Map& map, const MapClass& cls) {
    const Interval ab = s_map_window(map, cls);
    const FixedPoint fp = find_fixed_point(map, ab);
    if (std::abs(fp.derivative_at_K) <= 1.0 + kUnitSlopeTolerance) return std::nullopt;

    const double delta = 1e-8 * ab.width();
    auto h = [&](double x) { return map(map(x)) - x; };
    auto dh = [&](double x) { return map.derivatives(map(x)).f1 * map.derivatives(x).f1 - 1.0; };
    const double alpha = bisect_newton(h, dh, ab.lo, fp.K - delta);
    const double beta = map(alpha);
    return TwoCycle{alpha, beta, std::abs(map(alpha) - beta), std::abs(map(beta) - alpha)};
}

std::vector<double> iterate(const Map& map, double x0, std::size_t n) {
    std::vector<double> orbit;
    orbit.reserve(n + 1);
    if (!map.domain().contains(x0)) throw DomainError(map.name() + ": starting point outside the domain");
    orbit.push_back(x0);
    for (std::size_t k = 0; k < n; ++k) {
        const double next = map(orbit.back());
        if (!std::isfinite(next) || !map.domain().contains(next))
            throw DomainEscape(map.name() + ": iterate " + std::to_string(k + 1) + " left the domain");
        orbit.push_back(next);
    }
    return orbit;
}

std::vector<double> iterate_until_settled(const Map& map, double x0, std::size_t max_n) {
    std::vector<double> orbit = iterate(map, x0, 0);
    for (std::size_t k = 0; k < max_n; ++k) {
        const double next = map(orbit.back());
        if (!std::isfinite(next) || !map.domain().contains(next))
            throw DomainEscape(map.name() + ": iterate " + std::to_string(k + 1) + " left the domain");
        orbit.push_back(next);
        const std::size_t m = orbit.size();
        if (m >= 3 && std::abs(orbit[m - 1] - orbit[m - 3]) < 1e-14 * std::max(1.0, std::abs(orbit[m - 3])))
            break;
    }
    return orbit;
}

Interval interval_image(const Map& map, Interval iv) {
    Interval out = hull(map(iv.lo), map(iv.hi));
    if (const auto x0 = map.critical_point(); x0 && iv.interior(*x0)) {
        const double top = map(*x0);
        out.lo = std::min(out.lo, top);
        out.hi = std::max(out.hi, top);
    }
    return out;
}

DichotomyVerdict singer_dichotomy(const Map& map, const MapClass& cls) {
    const Interval ab = s_map_window(map, cls);
    DichotomyVerdict v;
    v.fixed_point = find_fixed_point(map, ab);
    if (std::abs(v.fixed_point.derivative_at_K) <= 1.0 + kUnitSlopeTolerance) {
        v.kind = DichotomyCase::GloballyAttractingFixedPoint;
        return v;
    }
    v.kind = DichotomyCase::GloballyAttractingTwoCycle;
    v.two_cycle = find_two_cycle(map, cls);
    return v;
}

void write_orbit_csv(std::ostream& os, std::span<const double> orbit) {
    os << "n,x\n";
    char buf[64];
    for (std::size_t k = 0; k < orbit.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, orbit[k]);
        os << buf;
    }
}

} // namespace sdde
