#pragma once

// Feedback maps f for x'(t) = -a x(t) + f(x(t - tau)).
//
// A Map is an immutable, cheaply copyable handle. Built-in families carry
// closed-form derivatives (propagated through Jet); maps built from a bare
// evaluation callback fall back to finite differences.

#include "sdde/interval.hpp"
#include "sdde/jet.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace sdde {

enum class Family {
    WrightExp,       // -r (e^x - 1)
    MackeyGlassHill, // p / (1 + x^n), x >= 0
    LasotaWazewska,  // p e^{-a x}, x >= 0
    Ricker,          // lambda x e^{-x}, x >= 0
    Logistic,        // lambda x (1 - x), x in [0, 1]
    TanhOdd,         // -a tanh(b x)
    ArctanOdd,       // -a atan(b x)
    TaylorMG,        // b x / (1 + x^n), x >= 0; `a` is the companion decay rate
    Linear,          // b x
};

[[nodiscard]] std::string_view family_name(Family f) noexcept;
[[nodiscard]] Family parse_family(std::string_view name);

struct MapSpec {
    Family family = Family::WrightExp;
    std::map<std::string, double> params;
    std::optional<Interval> domain; // restricts the family's natural domain

    [[nodiscard]] double param(const std::string& name) const;
};

enum class DerivMethod { ClosedForm, FiniteDifference };

struct DerivativeBundle {
    double f0 = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    DerivMethod method = DerivMethod::ClosedForm;
};

/// Scale-free view of the derivatives: the sign of f' and Sf. Maps whose f'
/// underflows (the Wright F-map far out) supply this directly so the
/// Schwarzian sign can still be read off.
struct DerivativeShape {
    double sign1 = 0.0;
    double schwarzian = 0.0;
};

class Map {
public:
    using ValueFn = std::function<double(double)>;
    using JetFn = std::function<Jet(const Jet&)>;
    using ShapeFn = std::function<DerivativeShape(double)>;

    /// Limits of f at the two ends of the domain (the value itself at a
    /// closed finite end). nullopt means infinite or unknown.
    struct EndValues {
        std::optional<double> lower;
        std::optional<double> upper;
    };

    explicit Map(const MapSpec& spec);

    /// Generic map known only through evaluation; derivatives by finite differences.
    static Map from_callback(std::string name, ValueFn f, Interval domain);

    /// Map with exact derivatives supplied as a jet function.
    static Map from_jet(std::string name, JetFn f, Interval domain, EndValues ends = {},
                        std::optional<double> critical_point = std::nullopt, ShapeFn shape = {});

    [[nodiscard]] const std::string& name() const noexcept;
    [[nodiscard]] const Interval& domain() const noexcept;
    [[nodiscard]] const EndValues& end_values() const noexcept;
    [[nodiscard]] std::optional<double> critical_point() const noexcept;
    [[nodiscard]] const std::optional<MapSpec>& spec() const noexcept;
    [[nodiscard]] bool has_closed_form() const noexcept;

    /// f(x); throws DomainError outside the domain.
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] DerivativeBundle derivatives(double x) const;
    [[nodiscard]] DerivativeShape shape(double x) const;

    /// x -> scale * f(x) + shift. Derivative method and critical point carry over.
    [[nodiscard]] Map affine(double scale, double shift, std::string name = {}) const;

private:
    struct Impl;
    explicit Map(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Absolute floor on |f'| below which a Schwarzian is refused.
inline constexpr double kDerivativeFloor = 1e-12;

[[nodiscard]] double eval(const Map& map, double x);
[[nodiscard]] DerivativeBundle derivatives(const Map& map, double x);
[[nodiscard]] double schwarzian(const DerivativeBundle& d, double floor = kDerivativeFloor);
[[nodiscard]] double schwarzian(const Map& map, double x, double floor = kDerivativeFloor);

enum class MapKind { SMap, SUMap, Neither };

struct MapClass {
    MapKind kind = MapKind::Neither;
    std::optional<double> critical_point; // x0 for SU-maps
    std::optional<double> finite_limit;   // f(-inf) or f(inf) on a whole-line domain
    std::optional<double> fixed_point;    // K, when the grid brackets it
    std::optional<double> witness;        // a violating point for Neither
    std::string reason;                   // what the witness violates
    Interval probe;
};

[[nodiscard]] std::string_view kind_name(MapKind k) noexcept;

/// Grid certification of the S-map / SU-map conditions on `probe`. Not a
/// proof: the conditions are checked on `grid_size` points plus one
/// refinement pass around near-zero values of f'.
[[nodiscard]] MapClass classify(const Map& map, Interval probe, int grid_size = 2048);

/// Same, on default_probe_interval(map).
[[nodiscard]] MapClass classify(const Map& map);

/// A finite working window: [A-1, B+1] around the candidate invariant
/// interval, clipped to the domain.
[[nodiscard]] Interval default_probe_interval(const Map& map);

/// [A, B] with f([A, B]) inside [A, B]. For S-maps B = sup f, A = f(B)
/// (or A = inf f, B = f(A) when sup f is infinite); for SU-maps
/// [f^2(x0), f(x0)], which requires f^2(x0) >= x0.
[[nodiscard]] Interval invariant_attracting_interval(const Map& map, const MapClass& cls);

} // namespace sdde
