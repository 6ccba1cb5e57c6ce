#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace sdde {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed real interval. Endpoints may be infinite for map domains.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] constexpr double width() const noexcept { return hi - lo; }
    [[nodiscard]] constexpr double midpoint() const noexcept { return 0.5 * (lo + hi); }
    [[nodiscard]] constexpr bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] constexpr bool contains(const Interval& o) const noexcept {
        return lo <= o.lo && o.hi <= hi;
    }
    [[nodiscard]] constexpr bool interior(double x) const noexcept { return lo < x && x < hi; }
    [[nodiscard]] bool is_finite() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
    [[nodiscard]] constexpr Interval inflated(double eps) const noexcept { return {lo - eps, hi + eps}; }
    [[nodiscard]] constexpr double lerp(double s) const noexcept { return lo + s * (hi - lo); }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

[[nodiscard]] inline Interval hull(double a, double b) noexcept {
    return {std::min(a, b), std::max(a, b)};
}

[[nodiscard]] inline std::optional<Interval> intersect(const Interval& a, const Interval& b) noexcept {
    Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (r.lo > r.hi) return std::nullopt;
    return r;
}

} // namespace sdde
