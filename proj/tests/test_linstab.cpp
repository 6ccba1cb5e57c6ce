#include "oracles.hpp"

#include "sdde/errors.hpp"
#include "sdde/linstab.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace sdde;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent winding count: uniform dense sampling of the rectangle
// [eps, R] x [eps, R] with n points per side, summing principal arg steps.
int dense_winding(double a, double b, double tau, int n) {
    using C = std::complex<double>;
    const double eps = 1e-6 * (a + std::abs(b));
    const double R = a + std::abs(b) + 1.0;
    auto chi = [&](C z) { return z + a - b * std::exp(-z * tau); };
    const C corners[5] = {{eps, eps}, {R, eps}, {R, R}, {eps, R}, {eps, eps}};
    double total = 0.0;
    C prev = chi(corners[0]);
    for (int side = 0; side < 4; ++side) {
        for (int i = 1; i <= n; ++i) {
            const C z = corners[side] + (corners[side + 1] - corners[side]) * (static_cast<double>(i) / n);
            const C cur = chi(z);
            total += std::arg(cur / prev);
            prev = cur;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// Hopf crossings tau_k = (arccos(a/b) + 2 pi k) / omega with omega = sqrt(b^2 - a^2).
int crossings_below(double a, double b, double tau) {
    const double omega = std::sqrt(b * b - a * a);
    int n = 0;
    for (int k = 0; k < 1000; ++k)
        if ((std::acos(a / b) + 2.0 * kPi * k) / omega < tau) ++n;
    return n;
}

} // namespace

TEST_CASE("critical delay") {
    for (double r : {1.0, 2.0, 5.0}) CHECK(*critical_delay(0.0, -r) == doctest::Approx(kPi / (2.0 * r)).epsilon(1e-14));
    CHECK(std::abs(*critical_delay(0.0, -kPi / 2.0) - 1.0) < 1e-9);
    const double t0 = *critical_delay(1.0, -10.0);
    CHECK(t0 == doctest::Approx(std::acos(-0.1) / std::sqrt(99.0)).epsilon(1e-14));
    CHECK(std::abs(t0 - 0.16794) < 1e-5);
    CHECK_FALSE(critical_delay(1.0, -0.5).has_value());
    CHECK_FALSE(critical_delay(1.0, -1.0).has_value());
    CHECK_THROWS_AS((void)critical_delay(1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS((void)critical_delay(1.0, 2.0), InvalidParameter);
}

TEST_CASE("the critical delay is a purely imaginary root") {
    for (auto [a, b] : {std::pair{0.0, -2.0}, std::pair{1.0, -10.0}, std::pair{0.3, -0.7}}) {
        const double t0 = *critical_delay(a, b);
        const double omega = std::sqrt(b * b - a * a);
        CHECK(std::abs(characteristic({a, b, t0}, {0.0, omega})) < 1e-12 * (1.0 + std::abs(b)));
    }
}

TEST_CASE("unstable root counts") {
    CHECK(count_unstable_pairs({1.0, -10.0, 0.1}) == 0);
    CHECK(count_unstable_pairs({1.0, -10.0, 0.2}) == 1);
    CHECK(dense_winding(1.0, -10.0, 0.1, 25000) == 0);
    CHECK(dense_winding(1.0, -10.0, 0.2, 25000) == 1);
    for (double tau : {0.1, 1.0, 10.0}) CHECK(count_unstable_pairs({1.0, -0.5, tau}) == 0);
    CHECK_THROWS_AS((void)count_unstable_pairs({1.0, 0.5, 1.0}), InvalidParameter);
    CHECK_THROWS_AS((void)count_unstable_pairs({1.0, -0.5, 0.0}), InvalidParameter);
    CHECK_THROWS_AS((void)count_unstable_pairs({-1.0, -0.5, 1.0}), InvalidParameter);
}

TEST_CASE("count flips 0 -> 1 across the critical delay") {
    const double t0 = *critical_delay(1.0, -10.0);
    CHECK(count_unstable_pairs({1.0, -10.0, t0 - 1e-4}) == 0);
    CHECK(count_unstable_pairs({1.0, -10.0, t0 + 1e-4}) == 1);
}

TEST_CASE("staircase: N(tau) counts the Hopf crossings below tau") {
    for (auto [a, b] : {std::pair{1.0, -10.0}, std::pair{0.0, -3.0}}) {
        int prev = 0;
        for (double tau = 0.013; tau < 4.0; tau += 0.0371) {
            CAPTURE(tau);
            const int n = count_unstable_pairs({a, b, tau});
            CHECK(n == crossings_below(a, b, tau));
            CHECK(n >= prev);
            CHECK(n <= prev + 1);
            prev = n;
        }
    }
}

TEST_CASE("local stability agrees with tau < tau0 on random triples") {
    const auto as = oracle::uniform(0.0, 3.0, 100, 41);
    const auto extra = oracle::uniform(0.1, 8.0, 100, 43);
    const auto taus = oracle::uniform(0.01, 3.0, 100, 47);
    for (int i = 0; i < 100; ++i) {
        const Linearization lin{as[i], -(as[i] + extra[i]), taus[i]};
        const double t0 = *critical_delay(lin.a, lin.b);
        if (std::abs(lin.tau - t0) < 1e-6) continue;
        CAPTURE(lin.a);
        CAPTURE(lin.b);
        CAPTURE(lin.tau);
        const StabilityResult r = analyze_stability(lin);
        CHECK(r.locally_stable == (lin.tau < t0));
    }
}

TEST_CASE("the delay-dependent global stability criterion implies local stability") {
    for (double b : {-1.5, -3.0, -10.0, -40.0}) {
        const double tau_max = -std::log(1.0 - 1.0 / std::abs(b)); // (1 - e^{-tau}) |b| = 1
        for (double s : {0.1, 0.5, 0.99}) {
            const Linearization lin{1.0, b, s * tau_max};
            CHECK(count_unstable_pairs(lin) == 0);
            CHECK(analyze_stability(lin).locally_stable);
        }
    }
}
