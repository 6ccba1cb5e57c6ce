#pragma once

// Linear stability of the equilibrium: the characteristic function
// chi(lambda) = lambda + a - b e^{-lambda tau}, b = f'(K) < 0.

#include <complex>
#include <optional>

namespace sdde {

struct Linearization {
    double a = 0.0;   // instantaneous decay, >= 0
    double b = -1.0;  // feedback slope f'(K), < 0
    double tau = 1.0; // delay, > 0
};

struct StabilityResult {
    bool locally_stable = true;
    std::optional<double> tau0;
    int unstable_pairs = 0; // roots with Re > 0 and Im > 0
};

[[nodiscard]] std::complex<double> characteristic(const Linearization& lin, std::complex<double> lambda);

/// First Hopf delay arccos(a/b) / sqrt(b^2 - a^2); nullopt when |b| <= a.
[[nodiscard]] std::optional<double> critical_delay(double a, double b);

/// Roots of chi in the open upper-right quarter plane, by the argument
/// principle on [eps, R] x [eps, R] with R = a + |b| + 1.
[[nodiscard]] int count_unstable_pairs(const Linearization& lin);

[[nodiscard]] StabilityResult analyze_stability(const Linearization& lin);

} // namespace sdde
