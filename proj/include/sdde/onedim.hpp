#pragma once

// Discrete dynamics of one-dimensional maps: fixed points, 2-cycles, orbits,
// interval images and the Singer dichotomy for S-maps.

#include "sdde/maps.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace sdde {

struct FixedPoint {
    double K = 0.0;
    double derivative_at_K = 0.0;
    double residual = 0.0; // |f(K) - K|
};

struct TwoCycle {
    double alpha = 0.0;
    double beta = 0.0;
    double residual_alpha = 0.0; // |f(alpha) - beta|
    double residual_beta = 0.0;  // |f(beta) - alpha|
};

enum class DichotomyCase { GloballyAttractingFixedPoint, GloballyAttractingTwoCycle };

struct DichotomyVerdict {
    DichotomyCase kind = DichotomyCase::GloballyAttractingFixedPoint;
    FixedPoint fixed_point;
    std::optional<TwoCycle> two_cycle;
};

[[nodiscard]] std::string_view case_name(DichotomyCase c) noexcept;

/// |f'(K)| within this of 1 counts as the non-expanding case.
inline constexpr double kUnitSlopeTolerance = 1e-9;

[[nodiscard]] FixedPoint find_fixed_point(const Map& map, Interval bracket);

/// Fixed point inside the invariant attracting interval of a classified map.
[[nodiscard]] FixedPoint find_fixed_point(const Map& map, const MapClass& cls);

/// The unique 2-cycle when |f'(K)| > 1, found as the fixed point of f^2 on
/// (A, K - delta); nullopt when |f'(K)| <= 1.
[[nodiscard]] std::optional<TwoCycle> find_two_cycle(const Map& map, const MapClass& cls);

/// [x0, f(x0), ..., f^n(x0)].
[[nodiscard]] std::vector<double> iterate(const Map& map, double x0, std::size_t n);

/// Like iterate, but stops once |x_{k+2} - x_k| < 1e-14 max(1, |x_k|).
[[nodiscard]] std::vector<double> iterate_until_settled(const Map& map, double x0, std::size_t max_n);

/// Image of an interval: endpoints plus the critical point when it lies inside.
[[nodiscard]] Interval interval_image(const Map& map, Interval iv);

[[nodiscard]] DichotomyVerdict singer_dichotomy(const Map& map, const MapClass& cls);

/// Writes `n,x` rows with 17 significant digits.
void write_orbit_csv(std::ostream& os, std::span<const double> orbit);

} // namespace sdde
