#pragma once

// Computable bounds for the global attractor of x' = -a x + f(x(t - tau)).
//
// Each pipeline returns a BoundsReport: either a global stability verdict or
// an interval [lo, hi] containing every solution's limit inferior/superior.
// Wright pipelines (a = 0) report in the y = e^x - 1 coordinates of
// y' = -r y(t-1)(1 + y); the others report in x.

#include "sdde/maps.hpp"
#include "sdde/onedim.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdde {

enum class Verdict { GlobalStability, BoundedByInterval };
enum class Pipeline { WrightBasic, WrightF, FCycle, GMap, HMap, Combined };
enum class Coordinates { X, Y };

[[nodiscard]] std::string_view verdict_name(Verdict v) noexcept;
[[nodiscard]] std::string_view pipeline_name(Pipeline p) noexcept;

struct BoundsReport {
    Verdict verdict = Verdict::GlobalStability;
    Pipeline pipeline = Pipeline::Combined;
    Coordinates coordinates = Coordinates::X;
    std::optional<Interval> interval; // computable bound, e.g. [g^2(0), g(0)]
    std::optional<Interval> cycle;    // tightened: the 2-cycle of the pipeline map
    std::optional<Interval> x_interval; // Wright pipelines: the same bounds in x = ln(1 + y)
    std::optional<Interval> x_cycle;
    double equilibrium = 0.0;
    double stability_margin = 0.0; // compared against `threshold`
    double threshold = 1.0;
    std::string lo_source; // which pipeline set each endpoint (best_bounds)
    std::string hi_source;
    std::vector<std::string> provenance;
};

/// F(y) = -1 + exp[(r y + 1 - e^{r y}) / y], F(0) = 0, as a Map on the real line.
[[nodiscard]] Map wright_f_map(double r);

/// g(x) = (1 - e^{-tau}) f(x) + e^{-tau} K.
[[nodiscard]] Map g_map(const Map& f, double tau, double K);

/// Bounds for x' = f(x(t - 1)) with an S-map f, f(0) = 0: stable when
/// |f'(0)| <= 3/2, else [f^{2k+1}(c), f^{2k}(c)] with c = sup f, tightened to
/// the 2-cycle of f.
[[nodiscard]] BoundsReport wright_type_bounds(const Map& f, int k = 3);

/// The same for f(x) = -r(e^x - 1), reported in y and x coordinates.
[[nodiscard]] BoundsReport wright_basic_bounds(double r, int k = 3);

/// [F^2(-1), F(-1)] and the 2-cycle of F (y coordinates). Requires r > 1.
[[nodiscard]] BoundsReport wright_F_bounds(double r);

/// Delay-independent bound [alpha, beta] from the 2-cycle of f (a = 1).
[[nodiscard]] BoundsReport f_cycle_bounds(const Map& f);

/// Delay-dependent bound [g^2(0), g(0)] plus the 2-cycle of g (a = 1).
[[nodiscard]] BoundsReport g_map_bounds(const Map& f, double tau);

/// Improved upper bound h(0), solving F(h) = (1 - e^{-tau}) f(0) with
/// F(x) = x - e^{-tau} f^{-1}(x) (a = 1).
[[nodiscard]] double h_map_bound(const Map& f, double tau);

/// x - e^{-tau} f^{-1}(x), the map inverted to obtain h(0).
[[nodiscard]] double h_map_auxiliary(const Map& f, double tau, double x);

/// Numerical inverse of a strictly decreasing map on [A - 1, B + 1].
[[nodiscard]] double inverse_decreasing(const Map& f, double value);

struct PipelineToggles {
    bool wright_basic = true;
    bool wright_f = true;
    bool f_cycle = true;
    bool g_map = true;
    bool h_map = true;
};

/// Intersection of every applicable pipeline for decay rate a >= 0.
/// a = 0 uses the Wright pipelines (y coordinates for WrightExp), a > 0 the
/// f/g/h pipelines after rescaling to unit decay.
[[nodiscard]] BoundsReport best_bounds(const Map& f, double a, double tau, int k = 3,
                                       PipelineToggles toggles = {});

/// Every applicable individual pipeline report, in pipeline order.
[[nodiscard]] std::vector<BoundsReport> all_pipelines(const Map& f, double a, double tau, int k = 3,
                                                      PipelineToggles toggles = {});

/// `pipeline,verdict,lo,hi,margin` header and rows.
void write_bounds_csv_header(std::ostream& os);
void write_bounds_csv_row(std::ostream& os, const BoundsReport& r);

} // namespace sdde
