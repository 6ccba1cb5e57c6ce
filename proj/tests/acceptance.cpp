// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria (capped at 1).

#include "oracles.hpp"

#include "sdde/bounds.hpp"
#include "sdde/certify.hpp"
#include "sdde/ddesim.hpp"
#include "sdde/linstab.hpp"
#include "sdde/maps.hpp"
#include "sdde/onedim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <string>

using namespace sdde;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Map make(Family f, std::map<std::string, double> p) { return Map(MapSpec{f, std::move(p), std::nullopt}); }
Map mackey_glass() { return make(Family::MackeyGlassHill, {{"p", 2.0}, {"n", 20.0}}); }

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

// Runs a criterion, turning an escaped exception into a FAIL line.
void guarded(int n, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(n, false, std::string("exception: ") + e.what());
    }
}

void c1() {
    const auto t0 = Clock::now();
    const BoundsReport F = wright_F_bounds(2.0);
    const double ms = ms_since(t0);
    const double hi = F.interval->hi;
    report(1, std::abs(hi - 2.112) < 1e-3 && ms < 1.0, fmt("F(-1) = %.6f (2.112), %.3f ms", hi, ms));
}

void c2() {
    const double hi = wright_basic_bounds(2.0, 0).interval->hi;
    report(2, std::abs(hi - 6.389) < 1e-3, fmt("e^r - 1 = %.6f (6.389)", hi));
}

void c3() {
    const Interval g = *g_map_bounds(mackey_glass(), 1.0).interval;
    report(3, std::abs(g.lo - 0.3679) < 1e-4 && std::abs(g.hi - 1.6321) < 1e-4,
           fmt("[g^2(0), g(0)] = [%.6f, %.6f] ([0.3679, 1.6321])", g.lo, g.hi));
}

void c4() {
    const Map f = mackey_glass();
    const double h0 = h_map_bound(f, 1.0);
    double worst = 0.0;
    for (double x : {0.8, 1.2, 1.6}) {
        const double closed = x - std::exp(-1.0) * std::pow(2.0 / x - 1.0, 1.0 / 20.0);
        worst = std::max(worst, std::abs(h_map_auxiliary(f, 1.0, x) - closed));
    }
    report(4, std::abs(h0 - 1.6071) < 1e-3 && worst < 1e-9,
           fmt("h(0) = %.6f (1.6071), closed-form error %.2e", h0, worst));
}

void c5() {
    const Map f = mackey_glass();
    const FixedPoint fp = find_fixed_point(f, classify(f));
    report(5, std::abs(fp.K - 1.0) < 1e-12 && std::abs(fp.derivative_at_K + 10.0) < 1e-9,
           fmt("K = %.15f, f'(K) = %.12f", fp.K, fp.derivative_at_K));
}

void c6() {
    const Map f = make(Family::WrightExp, {{"r", 1.5}});
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double x0 : {-0.5, 0.5, 1.0})
        worst = std::max(worst, std::abs(integrate({0.0, 1.0, f, History::constant(x0)}, 200.0).final_value()));
    const double ms = ms_since(t0);
    report(6, worst < 1e-3 && ms < 2000.0, fmt("max |x(200)| = %.3e over 3 histories, %.1f ms", worst, ms));
}

void c7() {
    const Map F = wright_f_map(2.0);
    const double hi = F(-1.0);
    const double lo = F(hi);
    bool ok = true;
    std::string detail;
    for (double y0 : {-0.5, 0.5}) {
        const TailStats ts = tail_stats(simulate_wright_y(2.0, History::constant(y0), 60.0));
        ok = ok && ts.m >= lo - 1e-3 && ts.M <= hi + 1e-3;
        detail += fmt("y0=%g [%.4f, %.4f] in [%.4f, %.4f]; ", y0, ts.m, ts.M, lo, hi);
    }
    const Map mg = mackey_glass();
    const Interval cyc = *f_cycle_bounds(mg).interval;
    const Interval g1 = *g_map_bounds(mg, 1.0).interval;
    for (auto [tau, bound] : {std::pair{1.0, g1}, std::pair{10.0, cyc}}) {
        const TailStats ts = tail_stats(integrate({1.0, tau, mg, History::constant(0.5)}, 100.0 * tau));
        ok = ok && ts.m >= bound.lo - 1e-3 && ts.M <= bound.hi + 1e-3;
        detail += fmt("MG tau=%g [%.4f, %.4f] in [%.4f, %.4f]; ", tau, ts.m, ts.M, bound.lo, bound.hi);
    }
    report(7, ok, detail);
}

void c8() {
    bool ok = true;
    std::string detail;

    // (i) Schwarzian closed forms
    double err_i = 0.0;
    for (double b : {0.5, 1.0, 2.5}) {
        const Map t = make(Family::TanhOdd, {{"a", 1.0}, {"b", b}});
        const Map at = make(Family::ArctanOdd, {{"a", 1.0}, {"b", b}});
        for (double x : oracle::uniform(-3.0, 3.0, 100, 11)) {
            const double q = 1.0 + b * b * x * x;
            err_i = std::max(err_i, std::abs(schwarzian(t, x) + 2.0 * b * b));
            err_i = std::max(err_i, std::abs(schwarzian(at, x) + 2.0 * b * b / (q * q)));
        }
    }
    ok = ok && err_i < 1e-9;
    detail += fmt("(i) %.1e; ", err_i);

    // (ii) affine post-composition
    const Map mg = mackey_glass();
    double err_ii = 0.0;
    for (auto [c, d] : {std::pair{0.6321, 0.3679}, std::pair{-3.0, 1.0}}) {
        const Map g = mg.affine(c, d);
        for (double x : oracle::uniform(0.3, 2.0, 100, 5)) {
            const double s = schwarzian(mg, x);
            err_ii = std::max(err_ii, std::abs(schwarzian(g, x) - s) / std::max(1.0, std::abs(s)));
        }
    }
    ok = ok && err_ii < 1e-10;
    detail += fmt("(ii) %.1e; ", err_ii);

    // (iii) [m, M] inside g([m, M]) on the Mackey-Glass certification runs
    int runs = 0;
    bool inv = true;
    for (double tau : {1.0, 10.0}) {
        RunConfig cfg;
        cfg.map = MapSpec{Family::MackeyGlassHill, {{"p", 2.0}, {"n", 20.0}}, std::nullopt};
        cfg.a = 1.0;
        cfg.tau = tau;
        cfg.histories = {HistorySpec{0.3, {}}, HistorySpec{1.8, {}}};
        cfg.T = tau == 1.0 ? 300.0 : 500.0;
        for (const auto& r : certify(cfg).runs) {
            ++runs;
            inv = inv && r.g_invariant.value_or(false);
        }
    }
    ok = ok && inv;
    detail += fmt("(iii) %d runs %s; ", runs, inv ? "invariant" : "NOT invariant");

    // (iv) RK4 order on x' = -x + x(t - 1)/2, history 1: exact e^{-t}/2 + 1/2 on [0, 1]
    const Map lin = make(Family::Linear, {{"b", 0.5}});
    auto err_at = [&](int m) {
        const double x = integrate({1.0, 1.0, lin, History::constant(1.0)}, 1.0, m).final_value();
        return std::abs(x - (0.5 + 0.5 * std::exp(-1.0)));
    };
    const double ratio = err_at(20) / err_at(40);
    ok = ok && ratio >= 12.0 && ratio <= 20.0;
    detail += fmt("(iv) ratio %.2f; ", ratio);

    // (v) 2-cycle residuals and nested refinement intervals
    const TwoCycle mc = *find_two_cycle(mg, classify(mg));
    bool nested = true;
    Interval prev{-kInf, kInf};
    double worst_res = std::max(mc.residual_alpha, mc.residual_beta);
    for (int k = 0; k <= 3; ++k) {
        const BoundsReport b = wright_basic_bounds(2.0, k);
        nested = nested && prev.contains(*b.interval) && b.interval->contains(*b.cycle);
        prev = *b.interval;
    }
    const Map w = make(Family::WrightExp, {{"r", 2.0}});
    const TwoCycle wc = *find_two_cycle(w, classify(w));
    worst_res = std::max({worst_res, wc.residual_alpha, wc.residual_beta});
    ok = ok && worst_res < 1e-9 && nested;
    detail += fmt("(v) residual %.1e, k=0..3 %s", worst_res, nested ? "nested" : "NOT nested");

    report(8, ok, detail);
}

void c9() {
    const auto t0 = Clock::now();
    // tau0(0, -r) = tau0(0, -1) / r, so the threshold r at tau = 1 is tau0(0, -1)
    const double r_star = *critical_delay(0.0, -1.0);
    const double t = *critical_delay(1.0, -10.0);
    const int below = count_unstable_pairs({1.0, -10.0, t - 1e-4});
    const int above = count_unstable_pairs({1.0, -10.0, t + 1e-4});
    const double ms = ms_since(t0);
    const bool ok = std::abs(r_star - std::numbers::pi / 2.0) < 1e-9 && below == 0 && above == 1 && ms < 1000.0;
    report(9, ok, fmt("threshold r = %.12f, tau0 = %.8f, N: %d -> %d, %.2f ms", r_star, t, below, above, ms));
}

void c10() {
    const fs::path root = fs::temp_directory_path() / "sdde_acceptance_ex3";
    fs::remove_all(root);
    const auto a = reproduce(Example::Ex3, root / "run1");
    const auto b = reproduce(Example::Ex3, root / "run2");
    bool same = a.size() == b.size() && !a.empty();
    for (std::size_t i = 0; same && i < a.size(); ++i)
        same = a[i].filename() == b[i].filename() && slurp(a[i]) == slurp(b[i]);
    fs::remove_all(root);
    report(10, same, fmt("%zu files compared", a.size()));
}

} // namespace

int main() {
    guarded(1, c1);
    guarded(2, c2);
    guarded(3, c3);
    guarded(4, c4);
    guarded(5, c5);
    guarded(6, c6);
    guarded(7, c7);
    guarded(8, c8);
    guarded(9, c9);
    guarded(10, c10);
    return failures == 0 ? 0 : 1;
}
