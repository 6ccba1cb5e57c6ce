#include "oracles.hpp"

#include "sdde/bounds.hpp"
#include "sdde/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sdde;

namespace {

Map make(Family f, std::map<std::string, double> p) { return Map(MapSpec{f, std::move(p), std::nullopt}); }
Map wright(double r) { return make(Family::WrightExp, {{"r", r}}); }
Map mackey_glass() { return make(Family::MackeyGlassHill, {{"p", 2.0}, {"n", 20.0}}); }

// direct transcription of F away from y = 0
double F_direct(double r, double y) { return -1.0 + std::exp((r * y + 1.0 - std::exp(r * y)) / y); }

double mg(double x) { return 2.0 / (1.0 + std::pow(x, 20.0)); }

} // namespace

TEST_CASE("basic Wright bounds") {
    CHECK(wright_basic_bounds(1.5).verdict == Verdict::GlobalStability);
    CHECK(wright_basic_bounds(1.2).verdict == Verdict::GlobalStability);
    CHECK_THROWS_AS((void)wright_basic_bounds(0.0), InvalidParameter);
    CHECK_THROWS_AS((void)wright_basic_bounds(-1.0), InvalidParameter);

    const BoundsReport k0 = wright_basic_bounds(2.0, 0);
    REQUIRE(k0.verdict == Verdict::BoundedByInterval);
    CHECK(k0.coordinates == Coordinates::Y);
    CHECK(k0.interval->hi == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
    CHECK(std::abs(k0.interval->hi - 6.389) < 1e-3);
    CHECK(k0.interval->lo == doctest::Approx(-1.0 + std::exp(-2.0 * (std::exp(2.0) - 1.0))).epsilon(1e-14));
    REQUIRE(k0.x_interval);
    CHECK(k0.x_interval->hi == 2.0);
    CHECK(k0.stability_margin == 2.0);
    CHECK(k0.threshold == 1.5);

    const BoundsReport k1 = wright_basic_bounds(2.0, 1);
    CHECK(k1.interval->lo > k0.interval->lo);
    CHECK(k1.interval->hi < k0.interval->hi);
}

TEST_CASE("refinement intervals are nested and shrink toward the 2-cycle") {
    for (double r : {1.6, 2.0, 3.0}) {
        const Map f = wright(r);
        const BoundsReport cyc = wright_basic_bounds(r, 3);
        REQUIRE(cyc.x_cycle);
        Interval prev = *wright_type_bounds(f, 0).interval;
        for (int k = 1; k <= 6; ++k) {
            const Interval cur = *wright_type_bounds(f, k).interval;
            CHECK(prev.contains(cur));
            CHECK(cur.contains(*cyc.x_cycle));
            prev = cur;
        }
        // independent iteration of f from c = r
        double x = r;
        for (int i = 0; i < 6; ++i) x = -r * std::expm1(x);
        CHECK(wright_type_bounds(f, 3).interval->hi == doctest::Approx(x).epsilon(1e-14));
    }
}

TEST_CASE("Wright F-map") {
    for (double r : {1.1, 1.5, 2.0, 3.0, 5.0}) {
        CAPTURE(r);
        const Map F = wright_f_map(r);
        CHECK(F(0.0) == 0.0);
        CHECK(F.derivatives(0.0).f1 == doctest::Approx(-r * r / 2.0).epsilon(1e-12));
        const oracle::Fn fn = [&](double y) { return F(y); };
        CHECK(std::abs(oracle::d1(fn, 0.0, 1e-5) + r * r / 2.0) < 1e-6);
        for (double y : {-0.9, -0.3, 0.2, 1.0, 2.5}) CHECK(F(y) == doctest::Approx(F_direct(r, y)).epsilon(1e-12));
        // decreasing on probes
        double prev = F(-0.999);
        for (double y = -0.99; y < 20.0; y += 0.01) {
            const double v = F(y);
            CHECK(v <= prev);
            prev = v;
        }
        CHECK(classify(F).kind == MapKind::SMap);
    }
    CHECK_THROWS_AS((void)wright_f_map(1.0), InvalidParameter);
}

TEST_CASE("F-map near the removable singularity") {
    const Map F = wright_f_map(2.0);
    for (double y : {1e-7, -1e-7, 1e-3, -1e-3, 0.2, -0.2}) {
        // the exponent (r y + 1 - e^{r y}) / y -> -r^2 y / 2 - r^3 y^2 / 6 - ...
        const double u = -(4.0 * y / 2.0 + 8.0 * y * y / 6.0 + 16.0 * y * y * y / 24.0 + 32.0 * std::pow(y, 4) / 120.0 +
                           64.0 * std::pow(y, 5) / 720.0 + 128.0 * std::pow(y, 6) / 5040.0);
        CHECK(F(y) == doctest::Approx(std::expm1(u)).epsilon(std::abs(y) < 1e-2 ? 1e-13 : 1e-6));
    }
    CHECK(F(1e4) == -1.0);
    CHECK(F.shape(1e4).sign1 < 0.0);
    CHECK(F.shape(1e4).schwarzian < 0.0);
}

TEST_CASE("F bounds") {
    const BoundsReport rep = wright_F_bounds(2.0);
    REQUIRE(rep.verdict == Verdict::BoundedByInterval);
    const double upper = -1.0 + std::exp(1.0 + std::exp(-2.0));
    CHECK(rep.interval->hi == doctest::Approx(upper).epsilon(1e-14));
    CHECK(std::abs(rep.interval->hi - 2.112) < 1e-3);
    CHECK(std::abs(rep.interval->lo - F_direct(2.0, upper)) < 1e-15);
    CHECK(std::abs(rep.interval->lo + 1.0) < 1e-12);
    REQUIRE(rep.cycle);
    CHECK(rep.interval->contains(*rep.cycle));
    CHECK(wright_F_bounds(1.3).verdict == Verdict::GlobalStability);
    CHECK(wright_F_bounds(1.5).verdict == Verdict::GlobalStability);
    CHECK_THROWS_AS((void)wright_F_bounds(1.0), InvalidParameter);
    CHECK_THROWS_AS((void)wright_F_bounds(0.5), InvalidParameter);
}

TEST_CASE("f-cycle bounds") {
    const BoundsReport mgb = f_cycle_bounds(mackey_glass());
    REQUIRE(mgb.verdict == Verdict::BoundedByInterval);
    CHECK(mgb.interval->lo < 1e-5);
    CHECK(std::abs(mgb.interval->hi - 2.0) < 1e-5);

    const Map lw = make(Family::LasotaWazewska, {{"p", 1.0}, {"a", 0.5}});
    const double K = oracle::bisect([](double x) { return std::exp(-0.5 * x) - x; }, 0.0, 1.0);
    CHECK(0.5 * K < 1.0);
    const BoundsReport lwb = f_cycle_bounds(lw);
    CHECK(lwb.verdict == Verdict::GlobalStability);
    CHECK(lwb.equilibrium == doctest::Approx(K).epsilon(1e-12));
    CHECK(lwb.stability_margin == doctest::Approx(0.5 * K).epsilon(1e-12));

    CHECK(f_cycle_bounds(make(Family::TanhOdd, {{"a", 0.9}, {"b", 1.0}})).verdict == Verdict::GlobalStability);
    CHECK_THROWS_AS((void)f_cycle_bounds(make(Family::Logistic, {{"lambda", 4.0}})), ClassificationError);
}

TEST_CASE("g-map bounds for Mackey-Glass") {
    const Map f = mackey_glass();
    const double e = std::exp(-1.0);
    const double g0 = (1.0 - e) * 2.0 + e;
    const double g20 = (1.0 - e) * mg(g0) + e;
    const BoundsReport rep = g_map_bounds(f, 1.0);
    REQUIRE(rep.verdict == Verdict::BoundedByInterval);
    CHECK(rep.interval->hi == doctest::Approx(g0).epsilon(1e-14));
    CHECK(rep.interval->lo == doctest::Approx(g20).epsilon(1e-12));
    CHECK(std::abs(rep.interval->hi - 1.6321) < 1e-4);
    CHECK(std::abs(rep.interval->lo - 0.3679) < 1e-4);
    REQUIRE(rep.cycle);
    CHECK(rep.interval->contains(*rep.cycle));
    CHECK(rep.stability_margin == doctest::Approx(10.0 * (1.0 - e)).epsilon(1e-12));

    const BoundsReport stable = g_map_bounds(f, 0.1);
    CHECK(stable.verdict == Verdict::GlobalStability);
    CHECK(stable.stability_margin == doctest::Approx(10.0 * (1.0 - std::exp(-0.1))).epsilon(1e-12));
    CHECK(std::abs(stable.stability_margin - 0.9516) < 1e-4);
    CHECK_FALSE(stable.interval.has_value());

    CHECK_THROWS_AS((void)g_map_bounds(f, 0.0), InvalidParameter);
    CHECK_THROWS_AS((void)g_map_bounds(f, -1.0), InvalidParameter);
}

TEST_CASE("g-map properties") {
    const Map f = mackey_glass();
    for (double tau : {0.5, 1.0, 3.0}) {
        const Map g = g_map(f, tau, 1.0);
        CHECK(std::abs(g(1.0) - 1.0) < 1e-12);
        CHECK(std::abs(g.derivatives(1.0).f1) == doctest::Approx((1.0 - std::exp(-tau)) * 10.0).epsilon(1e-12));
        for (double x : oracle::uniform(0.3, 2.0, 50, 31))
            CHECK(std::abs(schwarzian(g, x) - schwarzian(f, x)) <= 1e-10 * std::abs(schwarzian(f, x)));
    }
    // tau -> infinity: [g^2(0), g(0)] -> [f^2(0), f(0)]
    const Interval far = *g_map_bounds(f, 40.0).interval;
    CHECK(far.hi == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(far.lo == doctest::Approx(mg(2.0)).epsilon(1e-9));
}

TEST_CASE("h-map bound") {
    const Map f = mackey_glass();
    const double e = std::exp(-1.0);
    for (double x : {0.8, 1.0, 1.3, 1.6071}) {
        const double closed = x - e * std::pow(2.0 / x - 1.0, 1.0 / 20.0);
        CHECK(std::abs(h_map_auxiliary(f, 1.0, x) - closed) < 1e-9);
    }
    const double h0 = h_map_bound(f, 1.0);
    CHECK(std::abs(h0 - 1.6071) < 1e-3);
    CHECK(std::abs(h_map_auxiliary(f, 1.0, h0) - 2.0 * (1.0 - e)) < 1e-10);
    for (double tau : {0.3, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double g0 = (1.0 - std::exp(-tau)) * 2.0 + std::exp(-tau);
        CHECK(h_map_bound(f, tau) <= g0 + 1e-9);
    }
    CHECK(std::abs(h_map_bound(f, 1e-6) - 1.0) < 1e-4);
    CHECK_THROWS_AS((void)h_map_bound(wright(2.0), 1.0), NotApplicable);
}

TEST_CASE("numerical inverse") {
    const Map f = mackey_glass();
    for (double x : {0.7, 0.9, 1.0, 1.1, 1.4}) CHECK(inverse_decreasing(f, f(x)) == doctest::Approx(x).epsilon(1e-11));
    CHECK_THROWS_AS((void)inverse_decreasing(f, 5.0), InversionError);
}

TEST_CASE("best bounds") {
    const Map f = mackey_glass();
    SUBCASE("Mackey-Glass, tau = 1") {
        const BoundsReport b = best_bounds(f, 1.0, 1.0);
        REQUIRE(b.verdict == Verdict::BoundedByInterval);
        CHECK(b.interval->hi == doctest::Approx(h_map_bound(f, 1.0)).epsilon(1e-15));
        CHECK(b.hi_source == "HMap");
        const double alpha = f_cycle_bounds(f).interval->lo;
        const double g2 = g_map_bounds(f, 1.0).interval->lo;
        CHECK(b.interval->lo == std::max(g2, alpha));
        CHECK(b.lo_source == "GMap");
        REQUIRE(b.cycle);
        CHECK(b.cycle->width() == doctest::Approx(g_map_bounds(f, 1.0).cycle->width()));
    }
    SUBCASE("Wright, r = 2") {
        const BoundsReport b = best_bounds(wright(2.0), 0.0, 1.0);
        REQUIRE(b.verdict == Verdict::BoundedByInterval);
        CHECK(b.coordinates == Coordinates::Y);
        CHECK(std::abs(b.interval->hi - 2.112) < 1e-3);
        CHECK(b.hi_source == "WrightF");
        REQUIRE(b.cycle);
        CHECK(std::abs(b.cycle->hi - b.interval->hi) < 1e-12); // the F-map cycle, not the wider basic one
        CHECK(b.interval->lo > -1.0);
        CHECK(b.interval->lo >= wright_basic_bounds(2.0, 0).interval->lo);
    }
    SUBCASE("Mackey-Glass, tau = 0.05") {
        const BoundsReport b = best_bounds(f, 1.0, 0.05);
        CHECK(b.verdict == Verdict::GlobalStability);
        CHECK(b.equilibrium == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("pipeline ordering HMap <= GMap <= FCycle for the upper end") {
        for (double tau : {0.5, 1.0, 2.0, 10.0}) {
            const auto reps = all_pipelines(f, 1.0, tau);
            double fc = 0, gm = 0, hm = 0;
            for (const auto& r : reps) {
                if (r.pipeline == Pipeline::FCycle) fc = r.interval->hi;
                if (r.pipeline == Pipeline::GMap) gm = r.interval->hi;
                if (r.pipeline == Pipeline::HMap) hm = r.interval->hi;
            }
            CHECK(hm <= gm + 1e-9);
            CHECK(gm <= fc + 1e-9);
        }
    }
    SUBCASE("rescaled decay rate") {
        // x' = -2x + 2 f(x(t - 0.5)) is the unit-decay problem with delay 1
        const BoundsReport ref = best_bounds(f, 1.0, 1.0);
        const BoundsReport scaled = best_bounds(make(Family::MackeyGlassHill, {{"p", 4.0}, {"n", 20.0}}), 2.0, 0.5);
        CHECK(scaled.interval->lo == doctest::Approx(ref.interval->lo).epsilon(1e-12));
        CHECK(scaled.interval->hi == doctest::Approx(ref.interval->hi).epsilon(1e-12));
    }
}

TEST_CASE("bounds CSV rows") {
    std::ostringstream os;
    write_bounds_csv_header(os);
    write_bounds_csv_row(os, g_map_bounds(mackey_glass(), 0.1));
    const std::string s = os.str();
    CHECK(s.rfind("pipeline,verdict,lo,hi,margin\nGMap,GlobalStability,,,", 0) == 0);
}
