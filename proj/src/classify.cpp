#include "sdde/errors.hpp"
#include "sdde/maps.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sdde {

namespace {

struct Probe {
    double x = 0.0;
    double f1 = 0.0;
    DerivativeShape shape;
    bool exempt = false; // closed domain endpoint: f' may vanish there
};

// Minimizes |f'| on [lo, hi] by golden-section search.
double argmin_abs_derivative(const Map& map, double lo, double hi) {
    constexpr double kRatio = 0.6180339887498949;
    auto cost = [&](double x) { return std::abs(map.derivatives(x).f1); };
    double a = lo;
    double b = hi;
    double c = b - kRatio * (b - a);
    double d = a + kRatio * (b - a);
    double fc = cost(c);
    double fd = cost(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kRatio * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kRatio * (b - a);
            fd = cost(d);
        }
    }
    return 0.5 * (a + b);
}

std::optional<double> bisect_sign_change(const auto& g, double lo, double hi) {
    double glo = g(lo);
    if (glo == 0.0) return lo;
    for (int it = 0; it < 200; ++it) {
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
    return 0.5 * (lo + hi);
}

bool has_finite_limit(const Map& map) {
    const auto& ends = map.end_values();
    if (ends.lower || ends.upper) return true;
    if (map.has_closed_form() || map.spec()) return false;
    // Bare callbacks: probe far out and look for saturation.
    for (double far : {-1e6, 1e6}) {
        const double v1 = map(far);
        const double v2 = map(far / 2.0);
        if (std::isfinite(v1) && std::abs(v1 - v2) < 1e-6 * std::max(1.0, std::abs(v1))) return true;
    }
    return false;
}

MapClass neither(Interval probe, double witness, std::string reason) {
    MapClass c;
    c.kind = MapKind::Neither;
    c.witness = witness;
    c.reason = std::move(reason);
    c.probe = probe;
    return c;
}

} // namespace

std::string_view kind_name(MapKind k) noexcept {
    switch (k) {
    case MapKind::SMap: return "SMap";
    case MapKind::SUMap: return "SUMap";
    case MapKind::Neither: return "Neither";
    }
    return "?";
}

MapClass classify(const Map& map, Interval probe, int grid_size) {
    if (grid_size < 64) throw InvalidParameter("classify: grid_size must be at least 64");
    if (!probe.is_finite() || !(probe.lo < probe.hi) || !map.domain().contains(probe))
        throw DomainError("classify: probe interval must be finite and inside the domain");

    const Interval& dom = map.domain();
    auto make_probe = [&](double x) {
        Probe p;
        p.x = x;
        p.exempt = (x == dom.lo && std::isfinite(dom.lo)) || (x == dom.hi && std::isfinite(dom.hi));
        p.f1 = map.derivatives(x).f1;
        p.shape = map.shape(x);
        return p;
    };

    std::vector<Probe> pts;
    pts.reserve(static_cast<std::size_t>(grid_size) + 64);
    for (int i = 0; i < grid_size; ++i)
        pts.push_back(make_probe(probe.lerp(static_cast<double>(i) / (grid_size - 1))));

    double max_abs_f1 = 0.0;
    for (const auto& p : pts)
        if (std::isfinite(p.f1)) max_abs_f1 = std::max(max_abs_f1, std::abs(p.f1));

    // Refinement pass around near-zero f' and sign flips of f' or Sf.
    std::vector<Probe> extra;
    const std::size_t n = pts.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double a = std::abs(pts[i].f1);
        const double left = std::abs(pts[i - 1].f1);
        const double right = std::abs(pts[i + 1].f1);
        // flat runs (e.g. f' underflowed to 0) are not local minima
        const bool local_min = a <= left && a <= right && (a < left || a < right);
        const bool near_zero = local_min && a < 1e-3 * max_abs_f1;
        const bool flip = pts[i].shape.sign1 != pts[i + 1].shape.sign1 ||
                          (pts[i].shape.schwarzian < 0.0) != (pts[i + 1].shape.schwarzian < 0.0);
        if (!near_zero && !flip) continue;
        const double lo = pts[i - 1].x;
        const double hi = pts[i + 1].x;
        Probe best = make_probe(argmin_abs_derivative(map, lo, hi));
        // An isolated interior zero of f' (x -> -x^3 at 0) keeps its sign
        // on both sides; record it as a vanishing derivative.
        const double floor = kDerivativeFloor * std::max(1.0, max_abs_f1);
        if (near_zero && std::abs(best.f1) < floor && std::min(left, right) > floor && !best.exempt)
            best.shape.sign1 = 0.0;
        extra.push_back(best);
        for (int k = 1; k < 16; ++k) extra.push_back(make_probe(lo + (hi - lo) * k / 16.0));
    }
    pts.insert(pts.end(), extra.begin(), extra.end());
    std::sort(pts.begin(), pts.end(), [](const Probe& l, const Probe& r) { return l.x < r.x; });

    auto fixed_point_residual = [&](double x) { return map(x) - x; };

    // S-map: f' < 0 and Sf < 0 everywhere probed.
    const Probe* s_violation = nullptr;
    std::string s_reason;
    for (const auto& p : pts) {
        if (p.exempt) continue;
        // sign from the shape: f' may underflow to zero while its sign is known
        if (!(p.shape.sign1 < 0.0) || p.f1 > 0.0) {
            s_violation = &p;
            s_reason = "f' >= 0";
            break;
        }
        const double s = p.shape.schwarzian;
        if (!(s < 0.0)) {
            s_violation = &p;
            s_reason = "Sf >= 0";
            break;
        }
    }
    if (!s_violation) {
        const bool whole_line = std::isinf(dom.lo) && std::isinf(dom.hi);
        MapClass c;
        c.kind = MapKind::SMap;
        c.probe = probe;
        if (whole_line) {
            if (!has_finite_limit(map))
                return neither(probe, probe.lo, "no finite limit at either end of the real line");
            const auto& ends = map.end_values();
            c.finite_limit = ends.lower ? ends.lower : ends.upper;
        }
        const double glo = fixed_point_residual(probe.lo);
        const double ghi = fixed_point_residual(probe.hi);
        if ((glo >= 0.0) != (ghi >= 0.0) || glo == 0.0)
            c.fixed_point = bisect_sign_change(fixed_point_residual, probe.lo, probe.hi);
        return c;
    }

    // SU-map: one f' sign change (+ to -), Sf < 0 off x0, unique fixed point K > x0.
    int sign_changes = 0;
    double last_positive = probe.lo;
    double first_negative = probe.hi;
    double prev_sign = 0.0;
    bool zero_derivative_inside = false;
    double zero_at = 0.0;
    for (const auto& p : pts) {
        if (p.exempt) continue;
        const double sgn = p.shape.sign1;
        if (sgn == 0.0) {
            zero_derivative_inside = true;
            zero_at = p.x;
            continue;
        }
        if (prev_sign != 0.0 && sgn != prev_sign) {
            ++sign_changes;
            if (prev_sign > 0.0 && sgn < 0.0) first_negative = p.x;
        }
        if (sgn > 0.0 && sign_changes == 0) last_positive = p.x;
        prev_sign = sgn;
    }
    const bool up_then_down = sign_changes == 1 && first_negative > last_positive;
    if (!up_then_down) {
        if (sign_changes == 0 && zero_derivative_inside) return neither(probe, zero_at, "f' vanishes");
        return neither(probe, s_violation->x, s_reason);
    }

    auto f1_at = [&](double x) { return map.derivatives(x).f1; };
    const double x0 = *bisect_sign_change(f1_at, last_positive, first_negative);

    for (const auto& p : pts) {
        if (p.exempt || std::abs(p.f1) < kDerivativeFloor) continue;
        if (!(p.shape.schwarzian < 0.0)) return neither(probe, p.x, "Sf >= 0 away from the critical point");
    }

    // Fixed points: strict sign changes of f(x) - x, ignoring a zero sitting
    // exactly on the probe boundary (e.g. the trivial fixed point 0 of Ricker).
    std::vector<double> roots;
    double prev_x = probe.lo;
    double prev_g = fixed_point_residual(probe.lo);
    for (const auto& p : pts) {
        if (p.x == probe.lo) continue;
        const double g = fixed_point_residual(p.x);
        if (prev_g != 0.0 && g != 0.0 && (g > 0.0) != (prev_g > 0.0))
            roots.push_back(*bisect_sign_change(fixed_point_residual, prev_x, p.x));
        else if (g == 0.0 && p.x != probe.hi)
            roots.push_back(p.x);
        if (g != 0.0 || p.x != probe.hi) {
            prev_x = p.x;
            prev_g = g;
        }
    }
    if (roots.size() != 1) return neither(probe, x0, "fixed point is not unique on the probe interval");
    if (!(roots.front() > x0)) return neither(probe, roots.front(), "fixed point does not exceed the critical point");

    MapClass c;
    c.kind = MapKind::SUMap;
    c.probe = probe;
    c.critical_point = x0;
    c.fixed_point = roots.front();
    return c;
}

Interval default_probe_interval(const Map& map) {
    const Interval& dom = map.domain();
    auto clip = [&](Interval iv) {
        iv.lo = std::max(iv.lo, dom.lo);
        iv.hi = std::min(iv.hi, dom.hi);
        return iv;
    };
    if (const auto x0 = map.critical_point()) {
        const double top = map(*x0);
        double bottom = *x0;
        if (dom.contains(top)) bottom = std::min(bottom, map(top));
        return clip({std::min(bottom, *x0) - 1.0, std::max(top, *x0) + 1.0});
    }
    const auto& ends = map.end_values();
    if (ends.lower && dom.contains(*ends.lower)) {
        const double b = *ends.lower;
        return clip({map(b) - 1.0, b + 1.0});
    }
    if (ends.upper && dom.contains(*ends.upper)) {
        const double a = *ends.upper;
        return clip({a - 1.0, map(a) + 1.0});
    }
    return clip({-10.0, 10.0});
}

MapClass classify(const Map& map) { return classify(map, default_probe_interval(map)); }

Interval invariant_attracting_interval(const Map& map, const MapClass& cls) {
    switch (cls.kind) {
    case MapKind::Neither:
        throw ClassificationError(map.name() + " is neither an S-map nor an SU-map");
    case MapKind::SMap: {
        const auto& ends = map.end_values();
        if (ends.lower && map.domain().contains(*ends.lower)) {
            const double b = *ends.lower;
            return {map(b), b};
        }
        if (ends.upper && map.domain().contains(*ends.upper)) {
            const double a = *ends.upper;
            return {a, map(a)};
        }
        throw NotApplicable(map.name() + ": no finite bound on the range to anchor [A, B]");
    }
    case MapKind::SUMap: {
        const double x0 = cls.critical_point.value();
        const double b = map(x0);
        const double a = map(b);
        if (a < x0) throw NotApplicable(map.name() + ": f^2(x0) < x0, no S-map restriction");
        return {a, b};
    }
    }
    throw ClassificationError("unknown map class");
}

} // namespace sdde
