#include "sdde/ddesim.hpp"

#include "sdde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sdde {

namespace {

// Cubic Hermite on one step in power form p(s) = c0 + c1 s + c2 s^2 + c3 s^3.
struct Cubic {
    double c0, c1, c2, c3;

    Cubic(double x0, double x1, double d0, double d1, double h)
        : c0(x0), c1(h * d0), c2(3.0 * (x1 - x0) - h * (2.0 * d0 + d1)), c3(2.0 * (x0 - x1) + h * (d0 + d1)) {}

    [[nodiscard]] double operator()(double s) const { return c0 + s * (c1 + s * (c2 + s * c3)); }

    template <class Fn>
    void for_each_critical(Fn&& fn) const {
        // p'(s) = c1 + 2 c2 s + 3 c3 s^2
        const double A = 3.0 * c3;
        const double B = 2.0 * c2;
        const double C = c1;
        auto visit = [&](double s) {
            if (s > 0.0 && s < 1.0) fn(s);
        };
        if (std::abs(A) < 1e-300) {
            if (B != 0.0) visit(-C / B);
            return;
        }
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) return;
        const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        if (q != 0.0) {
            visit(q / A);
            visit(C / q);
        } else {
            visit(0.0);
        }
    }
};

void check_grid(double tau, int m) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParameter("tau must be positive and finite");
    if (m < 20) throw InvalidParameter("m_steps must be at least 20");
}

} // namespace

// ---- History ---------------------------------------------------------------

History History::constant(double value) {
    if (!std::isfinite(value)) throw InvalidHistory("constant history must be finite");
    return History(Constant{value});
}

History History::polyline(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw InvalidHistory("polyline history needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second))
            throw InvalidHistory("polyline history points must be finite");
        if (i > 0 && !(points[i].first > points[i - 1].first))
            throw InvalidHistory("polyline history times must be strictly increasing");
    }
    if (points.size() == 1) return constant(points.front().second);
    return History(Polyline{std::move(points)});
}

History History::function(std::function<double(double)> phi, std::string label) {
    if (!phi) throw InvalidHistory("function history is empty");
    return History(Function{std::move(phi), std::move(label)});
}

double History::operator()(double t) const {
    return std::visit(
        [t](const auto& h) -> double {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return h.value;
            } else if constexpr (std::is_same_v<T, Polyline>) {
                const auto& p = h.points;
                if (t <= p.front().first) return p.front().second;
                if (t >= p.back().first) return p.back().second;
                const auto it = std::upper_bound(p.begin(), p.end(), t,
                                                 [](double v, const auto& pt) { return v < pt.first; });
                const auto& [t1, x1] = *it;
                const auto& [t0, x0] = *(it - 1);
                return x0 + (x1 - x0) * (t - t0) / (t1 - t0);
            } else {
                return h.phi(t);
            }
        },
        data_);
}

bool History::is_constant() const noexcept { return std::holds_alternative<Constant>(data_); }

std::string History::label() const {
    if (const auto* c = std::get_if<Constant>(&data_)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "constant %.17g", c->value);
        return buf;
    }
    if (std::holds_alternative<Polyline>(data_)) return "polyline";
    return std::get<Function>(data_).label;
}

// ---- Trajectory ------------------------------------------------------------

Trajectory::Trajectory(double tau, int steps_per_delay, std::vector<double> values, std::vector<double> derivs,
                       double left_derivative_at_origin)
    : tau_(tau), m_(steps_per_delay), h_(tau / steps_per_delay), values_(std::move(values)),
      derivs_(std::move(derivs)), left_derivative_at_origin_(left_derivative_at_origin) {
    check_grid(tau, steps_per_delay);
    if (values_.size() != derivs_.size()) throw InvalidParameter("trajectory values and derivatives differ in length");
    if (values_.size() < static_cast<std::size_t>(m_) + 2)
        throw InvalidParameter("trajectory must extend past t = 0");
}

double Trajectory::time_at(std::size_t i) const noexcept {
    return (static_cast<double>(i) - static_cast<double>(m_)) * h_;
}

std::pair<double, double> Trajectory::step_derivatives(std::size_t i) const {
    const double left = derivs_[i];
    const double right = (i + 1 == origin_index()) ? left_derivative_at_origin_ : derivs_[i + 1];
    return {left, right};
}

double Trajectory::on_step(std::size_t i, double s) const {
    const auto [d0, d1] = step_derivatives(i);
    return Cubic(values_[i], values_[i + 1], d0, d1, h_)(s);
}

double Trajectory::operator()(double t) const {
    const double u = (t + tau_) / h_;
    const auto last = static_cast<double>(values_.size() - 2);
    const double i = std::clamp(std::floor(u), 0.0, last);
    return on_step(static_cast<std::size_t>(i), u - i);
}

std::pair<double, double> Trajectory::step_extrema(std::size_t i) const {
    const auto [d0, d1] = step_derivatives(i);
    const Cubic p(values_[i], values_[i + 1], d0, d1, h_);
    double lo = std::min(values_[i], values_[i + 1]);
    double hi = std::max(values_[i], values_[i + 1]);
    p.for_each_critical([&](double s) {
        const double v = p(s);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    });
    return {lo, hi};
}

Trajectory Trajectory::transformed(const std::function<double(double)>& g,
                                   const std::function<double(double)>& dg) const {
    std::vector<double> v(values_.size());
    std::vector<double> d(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        v[i] = g(values_[i]);
        d[i] = dg(values_[i]) * derivs_[i];
    }
    const double left = dg(values_[origin_index()]) * left_derivative_at_origin_;
    return Trajectory(tau_, m_, std::move(v), std::move(d), left);
}

// ---- integration -----------------------------------------------------------

Trajectory integrate(const DdeProblem& problem, double T, int m_steps) {
    const double a = problem.a;
    const double tau = problem.tau;
    check_grid(tau, m_steps);
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidParameter("decay rate a must be finite and >= 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidParameter("T must be positive and finite");

    const Map& f = problem.map;
    const Interval& dom = f.domain();
    const bool cone = a > 0.0 && dom.lo == 0.0;
    const std::size_t m = static_cast<std::size_t>(m_steps);
    const double h = tau / m_steps;
    const auto n_steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));

    std::vector<double> x(m + n_steps + 1);
    std::vector<double> dx(x.size());

    // history on the grid
    for (std::size_t i = 0; i <= m; ++i) {
        const double t = (static_cast<double>(i) - m_steps) * h;
        const double v = problem.history(t);
        if (!std::isfinite(v)) throw InvalidHistory("history is not finite at t = " + std::to_string(t));
        if (cone && v < 0.0) throw InvalidHistory("history must be nonnegative for a map on [0, inf)");
        if (!dom.contains(v)) throw InvalidHistory("history leaves the map domain at t = " + std::to_string(t));
        x[i] = v;
    }
    double left_at_origin = 0.0;
    if (!problem.history.is_constant()) {
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == 0)
                dx[i] = (x[1] - x[0]) / h;
            else if (i == m)
                dx[i] = (x[m] - x[m - 1]) / h;
            else
                dx[i] = (x[i + 1] - x[i - 1]) / (2.0 * h);
        }
        left_at_origin = dx[m];
    }

    // Delayed values can dip a rounding error outside a closed domain.
    auto feed = [&](double v) {
        if (!dom.contains(v)) {
            const double slack = 1e-9 * std::max(1.0, std::abs(v));
            if (v < dom.lo && v > dom.lo - slack) v = dom.lo;
            if (v > dom.hi && v < dom.hi + slack) v = dom.hi;
        }
        return f(v);
    };
    auto delayed_mid = [&](std::size_t j) {
        const double d0 = dx[j];
        const double d1 = (j + 1 == m) ? left_at_origin : dx[j + 1];
        return Cubic(x[j], x[j + 1], d0, d1, h)(0.5);
    };

    dx[m] = -a * x[m] + feed(x[0]);
    for (std::size_t n = m; n < m + n_steps; ++n) {
        const std::size_t j = n - m; // delayed step
        const double xn = x[n];
        const double f_mid = feed(delayed_mid(j));
        const double f_end = feed(x[j + 1]);
        const double k1 = dx[n];
        const double k2 = -a * (xn + 0.5 * h * k1) + f_mid;
        const double k3 = -a * (xn + 0.5 * h * k2) + f_mid;
        const double k4 = -a * (xn + h * k3) + f_end;
        const double next = xn + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double t_next = static_cast<double>(n + 1 - m) * h;
        if (!std::isfinite(next) || std::abs(next) > kBlowUp) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "solution exceeded %.0e at t = %.6g", kBlowUp, t_next);
            throw OverflowError(buf, t_next);
        }
        x[n + 1] = next;
        dx[n + 1] = -a * next + feed(x[j + 1]);
    }
    return Trajectory(tau, m_steps, std::move(x), std::move(dx), left_at_origin);
}

// ---- tail statistics ---------------------------------------------------------

namespace {

std::size_t tail_start(const Trajectory& traj, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidParameter("tail fraction must lie in (0, 1)");
    const double T = traj.t_end();
    if (T < 10.0 * traj.tau() * (1.0 - 1e-12))
        throw TooShort("trajectory covers " + std::to_string(T) + ", needs at least 10 delays");
    const double from = T - fraction * T;
    const auto i = static_cast<std::size_t>(std::ceil((from + traj.tau()) / traj.step() - 1e-9));
    return std::min(i, traj.node_count() - 2);
}

} // namespace

TailStats tail_stats(const Trajectory& traj, double fraction, double tol) {
    const std::size_t start = tail_start(traj, fraction);
    TailStats s;
    s.m = kInf;
    s.M = -kInf;
    for (std::size_t i = start; i + 1 < traj.node_count(); ++i) {
        const auto [lo, hi] = traj.step_extrema(i);
        s.m = std::min(s.m, lo);
        s.M = std::max(s.M, hi);
    }
    s.window = {traj.time_at(start), traj.t_end()};
    s.converged = s.M - s.m < tol;
    return s;
}

Trajectory simulate_wright_y(double r, const History& y_history, double T, int m_steps, double tau) {
    if (!(r > 0.0)) throw InvalidParameter("r must be positive");
    check_grid(tau, m_steps);
    const double h = tau / m_steps;
    for (int i = 0; i <= m_steps; ++i) {
        const double y = y_history((i - m_steps) * h);
        if (!(y > -1.0)) throw InvalidHistory("Wright history needs y > -1 on [-tau, 0]");
    }
    History x_history = y_history.is_constant()
                            ? History::constant(std::log1p(y_history(0.0)))
                            : History::function([y_history](double t) { return std::log1p(y_history(t)); },
                                                "ln(1 + y)");
    const DdeProblem p{0.0, tau, Map(MapSpec{Family::WrightExp, {{"r", r}}, std::nullopt}), std::move(x_history)};
    const Trajectory xs = integrate(p, T, m_steps);
    return xs.transformed([](double v) { return std::expm1(v); }, [](double v) { return std::exp(v); });
}

double square_wave_distance(const Trajectory& traj, const TwoCycle& cycle, double band, double fraction) {
    const double T = traj.t_end();
    const double from = T - fraction * T;
    auto i = static_cast<std::size_t>(std::max(0.0, std::ceil((from + traj.tau()) / traj.step() - 1e-9)));
    i = std::min(i, traj.node_count() - 2);
    std::size_t hits = 0;
    std::size_t total = 0;
    for (; i + 1 < traj.node_count(); ++i) {
        for (int k = 0; k < 8; ++k) {
            const double v = traj.on_step(i, (k + 0.5) / 8.0);
            if (std::abs(v - cycle.alpha) <= band || std::abs(v - cycle.beta) <= band) ++hits;
            ++total;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

bool positivity_check(const Trajectory& traj) {
    for (std::size_t i = traj.origin_index(); i + 1 < traj.node_count(); ++i) {
        const auto [lo, hi] = traj.step_extrema(i);
        (void)hi;
        if (lo > 0.0) continue;
        // The step starting at t = 0 may touch zero only at its left end.
        if (i == traj.origin_index() && traj.values()[i + 1] > 0.0) {
            bool positive = true;
            for (int k = 1; k <= 64 && positive; ++k) positive = traj.on_step(i, k / 64.0) > 0.0;
            if (positive) continue;
        }
        return false;
    }
    return true;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::string_view column, std::size_t stride) {
    if (stride == 0) stride = 1;
    os << "t," << column << '\n';
    char buf[64];
    const auto vals = traj.values();
    for (std::size_t i = 0; i < vals.size(); i += stride) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", traj.time_at(i), vals[i]);
        os << buf;
    }
}

} // namespace sdde
