#include "sdde/bounds.hpp"

#include "sdde/errors.hpp"
#include "sdde/rootfind.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace sdde {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// u(y) = (r y + 1 - e^{r y}) / y, with the removable singularity at 0.
Jet wright_f_exponent(const Jet& y, double r) {
    if (std::abs(r * y.v) < 0.5) {
        // u(y) = -sum_{k>=1} r^{k+1} y^k / (k+1)!
        constexpr int kTerms = 24;
        double coeff[kTerms + 1];
        double rk = r;     // r^{k+1}
        double fact = 1.0; // (k+1)!
        for (int k = 1; k <= kTerms; ++k) {
            rk *= r;
            fact *= (k + 1);
            coeff[k] = -rk / fact;
        }
        Jet acc(coeff[kTerms]);
        for (int k = kTerms - 1; k >= 1; --k) acc = acc * y + coeff[k];
        return acc * y;
    }
    using sdde::exp;
    return (r * y + 1.0 - exp(r * y)) / y;
}

// Beyond this r*y, e^{r y} is near overflow; F = -1 to double precision.
constexpr double kFSaturation = 700.0;

std::string cycle_text(const TwoCycle& c) { return "{" + fmt(c.alpha) + ", " + fmt(c.beta) + "}"; }

MapClass require_s_map(const Map& f) {
    MapClass cls = classify(f);
    if (cls.kind != MapKind::SMap)
        throw ClassificationError(f.name() + " classifies as " + std::string(kind_name(cls.kind)) +
                                  ", the bound pipelines need an S-map" +
                                  (cls.reason.empty() ? std::string() : " (" + cls.reason + ")"));
    return cls;
}

BoundsReport stable_report(Pipeline p, Coordinates c, double eq, double margin, double threshold,
                           std::string why) {
    BoundsReport r;
    r.verdict = Verdict::GlobalStability;
    r.pipeline = p;
    r.coordinates = c;
    r.equilibrium = eq;
    r.stability_margin = margin;
    r.threshold = threshold;
    r.provenance.push_back(std::move(why));
    return r;
}

std::optional<double> lower_anchor(const Map& f) {
    if (std::isfinite(f.domain().lo)) return f.domain().lo;
    return std::nullopt;
}

} // namespace

std::string_view verdict_name(Verdict v) noexcept {
    return v == Verdict::GlobalStability ? "GlobalStability" : "BoundedByInterval";
}

std::string_view pipeline_name(Pipeline p) noexcept {
    switch (p) {
    case Pipeline::WrightBasic: return "WrightBasic";
    case Pipeline::WrightF: return "WrightF";
    case Pipeline::FCycle: return "FCycle";
    case Pipeline::GMap: return "GMap";
    case Pipeline::HMap: return "HMap";
    case Pipeline::Combined: return "Combined";
    }
    return "?";
}

Map wright_f_map(double r) {
    if (!(r > 1.0)) throw InvalidParameter("the Wright F-map requires r > 1");
    auto jet = [r](const Jet& y) -> Jet {
        if (r * y.v > kFSaturation) return Jet(-1.0);
        using sdde::exp;
        return exp(wright_f_exponent(y, r)) - 1.0;
    };
    // S(e^u) = Su - u'^2 / 2 keeps the sign readable where e^u underflows.
    auto shape = [r](double y) -> DerivativeShape {
        if (r * y > kFSaturation) return {-1.0, -kInf};
        const Jet u = wright_f_exponent(Jet::variable(y), r);
        const double sign = u.d1 < 0.0 ? -1.0 : (u.d1 > 0.0 ? 1.0 : 0.0);
        const double p = u.d2 / u.d1;
        const double q = u.d3 / u.d1;
        return {sign, q - 1.5 * p * p - 0.5 * u.d1 * u.d1};
    };
    return Map::from_jet("WrightF(r=" + fmt(r) + ")", jet, {-kInf, kInf}, {std::expm1(r), -1.0}, std::nullopt,
                         shape);
}

Map g_map(const Map& f, double tau, double K) {
    if (!(tau > 0.0)) throw InvalidParameter("g-map requires tau > 0");
    const double decay = std::exp(-tau);
    return f.affine(-std::expm1(-tau), decay * K, "g[" + f.name() + ", tau=" + fmt(tau) + "]");
}

BoundsReport wright_type_bounds(const Map& f, int k) {
    if (k < 0) throw InvalidParameter("refinement count must be nonnegative");
    const MapClass cls = require_s_map(f);
    if (std::abs(f(0.0)) > 1e-12) throw InvalidParameter(f.name() + ": Wright-type bounds need f(0) = 0");
    const double slope = std::abs(f.derivatives(0.0).f1);
    if (slope <= 1.5)
        return stable_report(Pipeline::WrightBasic, Coordinates::X, 0.0, slope, 1.5,
                             "|f'(0)| = " + fmt(slope) + " <= 3/2: every solution tends to 0");

    BoundsReport r;
    r.verdict = Verdict::BoundedByInterval;
    r.pipeline = Pipeline::WrightBasic;
    r.coordinates = Coordinates::X;
    r.stability_margin = slope;
    r.threshold = 1.5;
    const auto& ends = f.end_values();
    if (ends.lower) {
        // c = f(-inf): [f^{2k+1}(c), f^{2k}(c)]
        double hi = *ends.lower;
        for (int i = 0; i < 2 * k; ++i) hi = f(hi);
        r.interval = Interval{f(hi), hi};
        r.provenance.push_back("[f^{2k+1}(c), f^{2k}(c)] with c = f(-inf) = " + fmt(*ends.lower) +
                               ", k = " + std::to_string(k));
    } else {
        double lo = ends.upper.value();
        for (int i = 0; i < 2 * k; ++i) lo = f(lo);
        r.interval = Interval{lo, f(lo)};
        r.provenance.push_back("[f^{2k}(c), f^{2k+1}(c)] with c = f(+inf) = " + fmt(*ends.upper) +
                               ", k = " + std::to_string(k));
    }
    if (const auto cyc = find_two_cycle(f, cls)) {
        r.cycle = Interval{cyc->alpha, cyc->beta};
        r.provenance.push_back("2-cycle of f: " + cycle_text(*cyc));
    }
    return r;
}

BoundsReport wright_basic_bounds(double r, int k) {
    if (!(r > 0.0)) throw InvalidParameter("Wright equation requires r > 0");
    const Map f(MapSpec{Family::WrightExp, {{"r", r}}, std::nullopt});
    BoundsReport x = wright_type_bounds(f, k);
    x.coordinates = Coordinates::Y;
    if (x.verdict == Verdict::GlobalStability) {
        x.provenance.back() = "r = " + fmt(r) + " <= 3/2: every solution tends to 0 (3/2-stability)";
        return x;
    }
    auto to_y = [](Interval iv) { return Interval{std::expm1(iv.lo), std::expm1(iv.hi)}; };
    x.x_interval = x.interval;
    x.x_cycle = x.cycle;
    x.interval = to_y(*x.x_interval);
    if (x.cycle) x.cycle = to_y(*x.x_cycle);
    x.provenance.push_back("y = e^x - 1: y-bounds [" + fmt(x.interval->lo) + ", " + fmt(x.interval->hi) +
                           "]; at k = 0 the upper bound is e^r - 1");
    return x;
}

BoundsReport wright_F_bounds(double r) {
    if (!(r > 1.0)) throw InvalidParameter("the F-map pipeline requires r > 1");
    if (r <= 1.5)
        return stable_report(Pipeline::WrightF, Coordinates::Y, 0.0, r, 1.5,
                             "r = " + fmt(r) + " <= 3/2: stability from the Wright-type dichotomy, not from F");
    const Map F = wright_f_map(r);
    BoundsReport rep;
    rep.verdict = Verdict::BoundedByInterval;
    rep.pipeline = Pipeline::WrightF;
    rep.coordinates = Coordinates::Y;
    rep.stability_margin = r;
    rep.threshold = 1.5;
    const double upper = F(-1.0);
    const double lower = F(upper);
    rep.interval = Interval{lower, upper};
    rep.x_interval = Interval{std::log1p(lower), std::log1p(upper)};
    rep.provenance.push_back("F(-1) = -1 + exp(-1 + r + e^{-r}) = " + fmt(upper));
    rep.provenance.push_back("F^2(-1) = " + fmt(lower));
    const MapClass cls = require_s_map(F);
    if (const auto cyc = find_two_cycle(F, cls)) {
        rep.cycle = Interval{cyc->alpha, cyc->beta};
        rep.x_cycle = Interval{std::log1p(cyc->alpha), std::log1p(cyc->beta)};
        rep.provenance.push_back("2-cycle of F: " + cycle_text(*cyc));
    }
    return rep;
}

BoundsReport f_cycle_bounds(const Map& f) {
    const MapClass cls = require_s_map(f);
    const DichotomyVerdict v = singer_dichotomy(f, cls);
    const double slope = std::abs(v.fixed_point.derivative_at_K);
    if (v.kind == DichotomyCase::GloballyAttractingFixedPoint)
        return stable_report(Pipeline::FCycle, Coordinates::X, v.fixed_point.K, slope, 1.0,
                             "|f'(K)| = " + fmt(slope) + " <= 1: K = " + fmt(v.fixed_point.K) +
                                 " attracts every solution for every delay");
    BoundsReport r;
    r.verdict = Verdict::BoundedByInterval;
    r.pipeline = Pipeline::FCycle;
    r.coordinates = Coordinates::X;
    r.equilibrium = v.fixed_point.K;
    r.stability_margin = slope;
    r.threshold = 1.0;
    r.interval = Interval{v.two_cycle->alpha, v.two_cycle->beta};
    r.cycle = r.interval;
    r.provenance.push_back("|f'(K)| = " + fmt(slope) + " > 1: delay-independent bound from the 2-cycle of f " +
                           cycle_text(*v.two_cycle));
    return r;
}

BoundsReport g_map_bounds(const Map& f, double tau) {
    if (!(tau > 0.0)) throw InvalidParameter("g-map bounds require tau > 0");
    const MapClass cls = require_s_map(f);
    const FixedPoint fp = find_fixed_point(f, cls);
    const double factor = -std::expm1(-tau);
    const double margin = factor * std::abs(fp.derivative_at_K);
    if (margin <= 1.0)
        return stable_report(Pipeline::GMap, Coordinates::X, fp.K, margin, 1.0,
                             "(1 - e^{-tau}) |f'(K)| = " + fmt(margin) + " <= 1: K = " + fmt(fp.K) +
                                 " is globally attracting");
    const Map g = g_map(f, tau, fp.K);
    const MapClass gcls = require_s_map(g);
    const Interval coarse = invariant_attracting_interval(g, gcls);

    BoundsReport r;
    r.verdict = Verdict::BoundedByInterval;
    r.pipeline = Pipeline::GMap;
    r.coordinates = Coordinates::X;
    r.equilibrium = fp.K;
    r.stability_margin = margin;
    r.threshold = 1.0;
    r.interval = coarse;
    r.provenance.push_back("(1 - e^{-tau}) |f'(K)| = " + fmt(margin) + " > 1");
    r.provenance.push_back("[g^2(0), g(0)] = [" + fmt(coarse.lo) + ", " + fmt(coarse.hi) + "]");
    if (const auto cyc = find_two_cycle(g, gcls)) {
        r.cycle = Interval{cyc->alpha, cyc->beta};
        r.provenance.push_back("2-cycle of g: " + cycle_text(*cyc));
    }
    return r;
}

double inverse_decreasing(const Map& f, double value) {
    const MapClass cls = classify(f);
    if (cls.kind != MapKind::SMap) throw InversionError(f.name() + " is not a decreasing S-map");
    const Interval ab = invariant_attracting_interval(f, cls);
    const Interval br{std::max(ab.lo - 1.0, f.domain().lo), std::min(ab.hi + 1.0, f.domain().hi)};
    const double top = f(br.lo);
    const double bottom = f(br.hi);
    if (!(value >= bottom && value <= top))
        throw InversionError("f^{-1}(" + fmt(value) + ") outside the bracket image [" + fmt(bottom) + ", " +
                             fmt(top) + "]");
    return bisect_newton([&](double x) { return f(x) - value; }, [&](double x) { return f.derivatives(x).f1; },
                         br.lo, br.hi);
}

double h_map_auxiliary(const Map& f, double tau, double x) {
    return x - std::exp(-tau) * inverse_decreasing(f, x);
}

double h_map_bound(const Map& f, double tau) {
    if (!(tau > 0.0)) throw InvalidParameter("h-map bound requires tau > 0");
    const auto anchor = lower_anchor(f);
    if (!anchor) throw NotApplicable(f.name() + ": the h-map bound needs a finite lower domain end");
    const MapClass cls = require_s_map(f);
    const Interval ab = invariant_attracting_interval(f, cls);
    const Interval br{std::max(ab.lo - 1.0, f.domain().lo), std::min(ab.hi + 1.0, f.domain().hi)};

    const double decay = std::exp(-tau);
    const double target = -std::expm1(-tau) * f(*anchor);
    auto aux = [&](double x) {
        // x - e^{-tau} f^{-1}(x), with f^{-1} by bisection on the bracket
        const double inv = bisect_newton([&](double s) { return f(s) - x; },
                                         [&](double s) { return f.derivatives(s).f1; }, br.lo, br.hi);
        return x - decay * inv;
    };
    const double lo = f(br.hi);
    const double hi = f(br.lo);
    const double aux_lo = aux(lo);
    const double aux_hi = aux(hi);
    if (!(aux_lo <= target && target <= aux_hi))
        throw InversionError("cannot bracket h(0): F ranges over [" + fmt(aux_lo) + ", " + fmt(aux_hi) +
                             "] but target is " + fmt(target));
    return bisect([&](double x) { return aux(x) - target; }, lo, hi, 1e-13);
}

std::vector<BoundsReport> all_pipelines(const Map& f, double a, double tau, int k, PipelineToggles toggles) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidParameter("decay rate a must be >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParameter("delay tau must be > 0");
    std::vector<BoundsReport> out;
    if (a == 0.0) {
        // x' = f(x(t - tau)) is x' = tau f(x(t - 1)) in units of tau.
        const auto& spec = f.spec();
        if (spec && spec->family == Family::WrightExp && !spec->domain) {
            const double r = spec->param("r") * tau;
            if (toggles.wright_basic) out.push_back(wright_basic_bounds(r, k));
            if (toggles.wright_f && r > 1.0) out.push_back(wright_F_bounds(r));
        } else if (toggles.wright_basic) {
            out.push_back(wright_type_bounds(tau == 1.0 ? f : f.affine(tau, 0.0), k));
        }
        return out;
    }
    // x' = -a x + f(x(t - tau)) is x' = -x + f(x)/a with delay a tau in units of 1/a.
    const Map fa = a == 1.0 ? f : f.affine(1.0 / a, 0.0);
    const double ta = a * tau;
    if (toggles.f_cycle) out.push_back(f_cycle_bounds(fa));
    if (toggles.g_map) out.push_back(g_map_bounds(fa, ta));
    if (toggles.h_map && lower_anchor(fa)) {
        const MapClass cls = require_s_map(fa);
        const FixedPoint fp = find_fixed_point(fa, cls);
        if (-std::expm1(-ta) * std::abs(fp.derivative_at_K) > 1.0) {
            const double h0 = h_map_bound(fa, ta);
            BoundsReport r;
            r.verdict = Verdict::BoundedByInterval;
            r.pipeline = Pipeline::HMap;
            r.coordinates = Coordinates::X;
            r.equilibrium = fp.K;
            r.stability_margin = -std::expm1(-ta) * std::abs(fp.derivative_at_K);
            r.threshold = 1.0;
            r.interval = Interval{-kInf, h0};
            r.provenance.push_back("h(0) = " + fmt(h0) + " solves x - e^{-tau} f^{-1}(x) = (1 - e^{-tau}) f(0)");
            out.push_back(std::move(r));
        }
    }
    return out;
}

BoundsReport best_bounds(const Map& f, double a, double tau, int k, PipelineToggles toggles) {
    const std::vector<BoundsReport> reports = all_pipelines(f, a, tau, k, toggles);
    if (reports.empty()) throw InvalidParameter("no bound pipeline enabled for this problem");

    BoundsReport out;
    out.pipeline = Pipeline::Combined;
    out.coordinates = reports.front().coordinates;
    out.equilibrium = reports.front().equilibrium;
    out.stability_margin = reports.front().stability_margin;
    out.threshold = reports.front().threshold;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::GlobalStability) {
            out.verdict = Verdict::GlobalStability;
            out.equilibrium = r.equilibrium;
            out.stability_margin = r.stability_margin;
            out.threshold = r.threshold;
            out.lo_source = out.hi_source = std::string(pipeline_name(r.pipeline));
            out.provenance.push_back(std::string(pipeline_name(r.pipeline)) + ": " + r.provenance.front());
            return out;
        }
    }
    out.verdict = Verdict::BoundedByInterval;
    Interval acc{-kInf, kInf};
    Interval x_acc{-kInf, kInf};
    bool have_x = false;
    for (const auto& r : reports) {
        const std::string name(pipeline_name(r.pipeline));
        if (r.interval->lo > acc.lo) {
            acc.lo = r.interval->lo;
            out.lo_source = name;
        }
        if (r.interval->hi < acc.hi) {
            acc.hi = r.interval->hi;
            out.hi_source = name;
        }
        if (r.x_interval) {
            have_x = true;
            x_acc.lo = std::max(x_acc.lo, r.x_interval->lo);
            x_acc.hi = std::min(x_acc.hi, r.x_interval->hi);
        }
        for (const auto& p : r.provenance) out.provenance.push_back(name + ": " + p);
        // narrowest pipeline 2-cycle
        if (r.cycle && (!out.cycle || r.cycle->width() < out.cycle->width())) out.cycle = r.cycle;
    }
    out.interval = acc;
    if (have_x) out.x_interval = x_acc;
    std::ostringstream os;
    os << "intersection [" << fmt(acc.lo) << " (" << out.lo_source << "), " << fmt(acc.hi) << " ("
       << out.hi_source << ")]";
    out.provenance.push_back(os.str());
    return out;
}

void write_bounds_csv_header(std::ostream& os) { os << "pipeline,verdict,lo,hi,margin\n"; }

void write_bounds_csv_row(std::ostream& os, const BoundsReport& r) {
    char buf[256];
    if (r.interval) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g\n", std::string(pipeline_name(r.pipeline)).c_str(),
                      std::string(verdict_name(r.verdict)).c_str(), r.interval->lo, r.interval->hi,
                      r.stability_margin);
    } else {
        std::snprintf(buf, sizeof buf, "%s,%s,,,%.17g\n", std::string(pipeline_name(r.pipeline)).c_str(),
                      std::string(verdict_name(r.verdict)).c_str(), r.stability_margin);
    }
    os << buf;
}

} // namespace sdde
