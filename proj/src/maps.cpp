#include "sdde/maps.hpp"

#include "sdde/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace sdde {

struct Map::Impl {
    std::string name;
    Interval domain;
    ValueFn value;
    JetFn jet; // empty: finite differences
    ShapeFn shape;
    EndValues ends;
    std::optional<double> critical;
    std::optional<MapSpec> spec;
};

namespace {

struct FamilyInfo {
    Family family;
    std::string_view name;
};

constexpr std::array kFamilies{
    FamilyInfo{Family::WrightExp, "WrightExp"},       FamilyInfo{Family::MackeyGlassHill, "MackeyGlassHill"},
    FamilyInfo{Family::LasotaWazewska, "LasotaWazewska"}, FamilyInfo{Family::Ricker, "Ricker"},
    FamilyInfo{Family::Logistic, "Logistic"},         FamilyInfo{Family::TanhOdd, "TanhOdd"},
    FamilyInfo{Family::ArctanOdd, "ArctanOdd"},       FamilyInfo{Family::TaylorMG, "TaylorMG"},
    FamilyInfo{Family::Linear, "Linear"},
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

// Everything needed to turn a generic expression into a Map.
struct FamilyParts {
    Interval natural_domain;
    Map::EndValues natural_ends;
    std::optional<double> critical;
};

struct Built {
    std::string name;
    Map::ValueFn value;
    Map::JetFn jet;
};

template <class Fn>
Built make_impl(std::string name, Fn fn) {
    return {std::move(name), [fn](double x) { return fn(x); }, [fn](const Jet& x) { return fn(x); }};
}

Built build_family(const MapSpec& spec, FamilyParts& parts) {
    const Interval line{-kInf, kInf};
    const Interval half{0.0, kInf};
    switch (spec.family) {
    case Family::WrightExp: {
        const double r = spec.param("r");
        require(r > 0.0, "WrightExp requires r > 0");
        parts = {line, {r, std::nullopt}, std::nullopt};
        return make_impl("WrightExp", [r](const auto& x) {
            using std::exp;
            return -r * (exp(x) - 1.0);
        });
    }
    case Family::MackeyGlassHill: {
        const double p = spec.param("p");
        const double n = spec.param("n");
        require(p > 0.0 && n > 1.0, "MackeyGlassHill requires p > 0 and n > 1");
        parts = {half, {p, 0.0}, std::nullopt};
        return make_impl("MackeyGlassHill", [p, n](const auto& x) {
            using std::pow;
            return p / (1.0 + pow(x, n));
        });
    }
    case Family::LasotaWazewska: {
        const double p = spec.param("p");
        const double a = spec.param("a");
        require(p > 0.0 && a > 0.0, "LasotaWazewska requires p > 0 and a > 0");
        parts = {half, {p, 0.0}, std::nullopt};
        return make_impl("LasotaWazewska", [p, a](const auto& x) {
            using std::exp;
            return p * exp(-a * x);
        });
    }
    case Family::Ricker: {
        const double lambda = spec.param("lambda");
        require(lambda > 0.0, "Ricker requires lambda > 0");
        parts = {half, {0.0, 0.0}, 1.0};
        return make_impl("Ricker", [lambda](const auto& x) {
            using std::exp;
            return lambda * x * exp(-x);
        });
    }
    case Family::Logistic: {
        const double lambda = spec.param("lambda");
        require(lambda > 0.0 && lambda <= 4.0, "Logistic requires 0 < lambda <= 4");
        parts = {{0.0, 1.0}, {0.0, 0.0}, 0.5};
        return make_impl("Logistic", [lambda](const auto& x) { return lambda * x * (1.0 - x); });
    }
    case Family::TanhOdd: {
        const double a = spec.param("a");
        const double b = spec.param("b");
        require(a > 0.0 && b > 0.0, "TanhOdd requires a > 0 and b > 0");
        parts = {line, {a, -a}, std::nullopt};
        return make_impl("TanhOdd", [a, b](const auto& x) {
            using std::tanh;
            return -a * tanh(b * x);
        });
    }
    case Family::ArctanOdd: {
        const double a = spec.param("a");
        const double b = spec.param("b");
        require(a > 0.0 && b > 0.0, "ArctanOdd requires a > 0 and b > 0");
        const double lim = a * std::numbers::pi / 2.0;
        parts = {line, {lim, -lim}, std::nullopt};
        return make_impl("ArctanOdd", [a, b](const auto& x) {
            using std::atan;
            return -a * atan(b * x);
        });
    }
    case Family::TaylorMG: {
        const double a = spec.param("a");
        const double b = spec.param("b");
        const double n = spec.param("n");
        require(a > 0.0 && b > 0.0 && n > 1.0, "TaylorMG requires a > 0, b > 0 and n > 1");
        parts = {half, {0.0, 0.0}, std::pow(1.0 / (n - 1.0), 1.0 / n)};
        return make_impl("TaylorMG", [b, n](const auto& x) {
            using std::pow;
            return b * x / (1.0 + pow(x, n));
        });
    }
    case Family::Linear: {
        const double b = spec.param("b");
        std::optional<double> zero;
        if (b == 0.0) zero = 0.0;
        parts = {line, {zero, zero}, std::nullopt};
        return make_impl("Linear", [b](const auto& x) { return b * x; });
    }
    }
    throw InvalidParameter("unknown family");
}

DerivativeBundle finite_difference_bundle(const Map::ValueFn& f, double x) {
    const double h = 1e-3 * std::max(1.0, std::abs(x));
    const double fm2 = f(x - 2.0 * h);
    const double fm1 = f(x - h);
    const double f0 = f(x);
    const double fp1 = f(x + h);
    const double fp2 = f(x + 2.0 * h);
    return {f0, (fp1 - fm1) / (2.0 * h), (fp1 - 2.0 * f0 + fm1) / (h * h),
            (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h), DerivMethod::FiniteDifference};
}

} // namespace

std::string_view family_name(Family f) noexcept {
    for (const auto& info : kFamilies)
        if (info.family == f) return info.name;
    return "?";
}

Family parse_family(std::string_view name) {
    for (const auto& info : kFamilies)
        if (info.name == name) return info.family;
    throw InvalidParameter("unknown map family '" + std::string(name) + "'");
}

double MapSpec::param(const std::string& name) const {
    const auto it = params.find(name);
    if (it == params.end())
        throw InvalidParameter(std::string(family_name(family)) + " requires parameter '" + name + "'");
    if (!std::isfinite(it->second)) throw InvalidParameter("parameter '" + name + "' must be finite");
    return it->second;
}

Map::Map(const MapSpec& spec) {
    FamilyParts parts;
    Built built = build_family(spec, parts);
    auto impl = std::make_shared<Impl>();
    impl->name = std::move(built.name);
    impl->value = std::move(built.value);
    impl->jet = std::move(built.jet);
    impl->domain = parts.natural_domain;
    impl->ends = parts.natural_ends;
    if (spec.domain) {
        const Interval d = *spec.domain;
        if (!(d.lo < d.hi) || !parts.natural_domain.contains(d))
            throw InvalidParameter("domain must be a nonempty subinterval of the family's natural domain");
        impl->domain = d;
        if (std::isfinite(d.lo)) impl->ends.lower = impl->value(d.lo);
        if (std::isfinite(d.hi)) impl->ends.upper = impl->value(d.hi);
    }
    if (parts.critical && !impl->domain.interior(*parts.critical)) parts.critical.reset();
    impl->critical = parts.critical;
    impl->spec = spec;
    impl_ = std::move(impl);
}

Map Map::from_callback(std::string name, ValueFn f, Interval domain) {
    auto impl = std::make_shared<Impl>();
    impl->name = std::move(name);
    impl->value = std::move(f);
    impl->domain = domain;
    if (std::isfinite(domain.lo)) impl->ends.lower = impl->value(domain.lo);
    if (std::isfinite(domain.hi)) impl->ends.upper = impl->value(domain.hi);
    return Map(std::shared_ptr<const Impl>(std::move(impl)));
}

Map Map::from_jet(std::string name, JetFn f, Interval domain, EndValues ends,
                  std::optional<double> critical_point, ShapeFn shape) {
    auto impl = std::make_shared<Impl>();
    impl->name = std::move(name);
    impl->jet = f;
    impl->value = [f = std::move(f)](double x) { return f(Jet(x)).v; };
    impl->domain = domain;
    impl->ends = ends;
    impl->critical = critical_point;
    impl->shape = std::move(shape);
    return Map(std::shared_ptr<const Impl>(std::move(impl)));
}

const std::string& Map::name() const noexcept { return impl_->name; }
const Interval& Map::domain() const noexcept { return impl_->domain; }
const Map::EndValues& Map::end_values() const noexcept { return impl_->ends; }
std::optional<double> Map::critical_point() const noexcept { return impl_->critical; }
const std::optional<MapSpec>& Map::spec() const noexcept { return impl_->spec; }
bool Map::has_closed_form() const noexcept { return static_cast<bool>(impl_->jet); }

double Map::operator()(double x) const {
    if (!impl_->domain.contains(x))
        throw DomainError(impl_->name + ": x = " + std::to_string(x) + " outside the domain");
    return impl_->value(x);
}

DerivativeBundle Map::derivatives(double x) const {
    if (!impl_->domain.contains(x))
        throw DomainError(impl_->name + ": x = " + std::to_string(x) + " outside the domain");
    if (!impl_->jet) return finite_difference_bundle(impl_->value, x);
    const Jet j = impl_->jet(Jet::variable(x));
    return {j.v, j.d1, j.d2, j.d3, DerivMethod::ClosedForm};
}

DerivativeShape Map::shape(double x) const {
    if (impl_->shape) {
        if (!impl_->domain.contains(x))
            throw DomainError(impl_->name + ": x = " + std::to_string(x) + " outside the domain");
        return impl_->shape(x);
    }
    const DerivativeBundle d = derivatives(x);
    const double sign = d.f1 > 0.0 ? 1.0 : (d.f1 < 0.0 ? -1.0 : 0.0);
    if (sign == 0.0) return {0.0, std::numeric_limits<double>::quiet_NaN()};
    const double r2 = d.f2 / d.f1;
    return {sign, d.f3 / d.f1 - 1.5 * r2 * r2};
}

Map Map::affine(double scale, double shift, std::string name) const {
    if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(shift))
        throw InvalidParameter("affine post-composition needs a finite nonzero scale");
    auto impl = std::make_shared<Impl>(*impl_);
    impl->name = name.empty() ? impl_->name + "(affine)" : std::move(name);
    auto base = impl_;
    impl->value = [base, scale, shift](double x) { return scale * base->value(x) + shift; };
    if (base->jet) impl->jet = [base, scale, shift](const Jet& x) { return scale * base->jet(x) + shift; };
    if (base->shape) {
        const double sgn = scale > 0.0 ? 1.0 : -1.0;
        impl->shape = [base, sgn](double x) {
            DerivativeShape s = base->shape(x);
            s.sign1 *= sgn;
            return s;
        };
    }
    auto map_end = [&](std::optional<double> v) -> std::optional<double> {
        if (!v) return std::nullopt;
        return scale * *v + shift;
    };
    impl->ends = {map_end(impl_->ends.lower), map_end(impl_->ends.upper)};
    impl->spec.reset();
    return Map(std::shared_ptr<const Impl>(std::move(impl)));
}

double eval(const Map& map, double x) { return map(x); }

DerivativeBundle derivatives(const Map& map, double x) { return map.derivatives(x); }

double schwarzian(const DerivativeBundle& d, double floor) {
    if (!(std::abs(d.f1) >= floor))
        throw CriticalPointError("|f'| = " + std::to_string(std::abs(d.f1)) + " below the derivative floor");
    const double r2 = d.f2 / d.f1;
    return d.f3 / d.f1 - 1.5 * r2 * r2;
}

double schwarzian(const Map& map, double x, double floor) { return schwarzian(map.derivatives(x), floor); }

} // namespace sdde
