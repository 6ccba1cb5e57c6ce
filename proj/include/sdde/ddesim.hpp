#pragma once

// Method-of-steps RK4 integration of x'(t) = -a x(t) + f(x(t - tau)).
//
// The step is h = tau / m with integer m, so delayed node values are stored
// values; the delayed value at a stage midpoint comes from the cubic Hermite
// interpolant of the stored (value, derivative) pairs.

#include "sdde/maps.hpp"
#include "sdde/onedim.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sdde {

/// Initial segment on [-tau, 0].
class History {
public:
    static History constant(double value);
    /// Points (t, x) with increasing t covering [-tau, 0]; linear in between.
    static History polyline(std::vector<std::pair<double, double>> points);
    static History function(std::function<double(double)> phi, std::string label = "function");

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] bool is_constant() const noexcept;
    [[nodiscard]] std::string label() const;

private:
    struct Constant {
        double value;
    };
    struct Polyline {
        std::vector<std::pair<double, double>> points;
    };
    struct Function {
        std::function<double(double)> phi;
        std::string label;
    };
    explicit History(std::variant<Constant, Polyline, Function> v) : data_(std::move(v)) {}
    std::variant<Constant, Polyline, Function> data_;
};

struct DdeProblem {
    double a = 1.0;
    double tau = 1.0;
    Map map;
    History history;
};

/// Dense solution on a uniform grid t_i = -tau + i h.
class Trajectory {
public:
    Trajectory(double tau, int steps_per_delay, std::vector<double> values, std::vector<double> derivs,
               double left_derivative_at_origin);

    [[nodiscard]] double tau() const noexcept { return tau_; }
    [[nodiscard]] double step() const noexcept { return h_; }
    [[nodiscard]] int steps_per_delay() const noexcept { return m_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return values_.size(); }
    [[nodiscard]] std::size_t origin_index() const noexcept { return static_cast<std::size_t>(m_); }
    [[nodiscard]] double time_at(std::size_t i) const noexcept;
    [[nodiscard]] double t_end() const noexcept { return time_at(values_.size() - 1); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> derivatives() const noexcept { return derivs_; }
    [[nodiscard]] double final_value() const noexcept { return values_.back(); }

    /// Hermite dense output on [-tau, t_end].
    [[nodiscard]] double operator()(double t) const;
    /// Hermite interpolant on step i at fraction s in [0, 1].
    [[nodiscard]] double on_step(std::size_t i, double s) const;
    /// Derivative used at the left end of step i and at the right end of step i.
    [[nodiscard]] std::pair<double, double> step_derivatives(std::size_t i) const;
    /// min and max of the Hermite cubic on step i.
    [[nodiscard]] std::pair<double, double> step_extrema(std::size_t i) const;

    /// Pointwise transform x -> g(x) with derivative chain rule g'(x) x'.
    [[nodiscard]] Trajectory transformed(const std::function<double(double)>& g,
                                         const std::function<double(double)>& dg) const;

private:
    double tau_;
    int m_;
    double h_;
    std::vector<double> values_;
    std::vector<double> derivs_; // right derivative at each node
    double left_derivative_at_origin_;
};

inline constexpr double kBlowUp = 1e12;

/// Fixed-step RK4 with h = tau / m_steps up to the first grid time >= T.
[[nodiscard]] Trajectory integrate(const DdeProblem& problem, double T, int m_steps = 200);

struct TailStats {
    double m = 0.0; // tail minimum (liminf proxy)
    double M = 0.0; // tail maximum (limsup proxy)
    Interval window;
    bool converged = false; // M - m < tol
};

[[nodiscard]] TailStats tail_stats(const Trajectory& traj, double fraction = 0.2, double tol = 1e-6);

/// Solves y' = -r y(t - tau)(1 + y(t)) through x = ln(1 + y) and returns y.
[[nodiscard]] Trajectory simulate_wright_y(double r, const History& y_history, double T, int m_steps = 200,
                                           double tau = 1.0);

/// Fraction of the tail during which the solution is within `band` of alpha or beta.
[[nodiscard]] double square_wave_distance(const Trajectory& traj, const TwoCycle& cycle, double band,
                                          double fraction = 0.2);

/// True iff the dense output is > 0 for every t > 0.
[[nodiscard]] bool positivity_check(const Trajectory& traj);

/// `t,<column>` rows, 17 significant digits, from t = -tau (every `stride`-th node).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::string_view column = "x",
                          std::size_t stride = 1);

} // namespace sdde
