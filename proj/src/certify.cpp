#include "sdde/certify.hpp"

#include "sdde/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

namespace sdde {

namespace {

bool is_input_error(const std::exception& e) {
    return dynamic_cast<const InvalidParameter*>(&e) || dynamic_cast<const InvalidHistory*>(&e) ||
           dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
           dynamic_cast<const ClassificationError*>(&e);
}

template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.what(), is_input_error(e));
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json interval_json(const std::optional<Interval>& iv) {
    if (!iv) return nullptr;
    return {iv->lo, iv->hi};
}

nlohmann::json report_json(const BoundsReport& r) {
    nlohmann::json j;
    j["pipeline"] = pipeline_name(r.pipeline);
    j["verdict"] = verdict_name(r.verdict);
    j["coordinates"] = r.coordinates == Coordinates::Y ? "y" : "x";
    j["interval"] = interval_json(r.interval);
    j["cycle"] = interval_json(r.cycle);
    j["equilibrium"] = r.equilibrium;
    j["stability_margin"] = r.stability_margin;
    j["threshold"] = r.threshold;
    if (!r.lo_source.empty()) j["lo_source"] = r.lo_source;
    if (!r.hi_source.empty()) j["hi_source"] = r.hi_source;
    j["provenance"] = r.provenance;
    return j;
}

Trajectory run_one(const RunConfig& config, const Map& f, const HistorySpec& h, double T) {
    if (config.wright_y())
        return simulate_wright_y(config.map.param("r"), h.to_history(), T, config.m_steps, config.tau);
    return integrate(DdeProblem{config.a, config.tau, f, h.to_history()}, T, config.m_steps);
}

} // namespace

bool Certification::all_contained() const noexcept {
    for (const auto& r : runs)
        if (!r.contained) return false;
    return true;
}

Map working_map(const RunConfig& config) {
    const Map f(config.map);
    if (config.a > 0.0) return config.a == 1.0 ? f : f.affine(1.0 / config.a, 0.0, f.name() + "/a");
    return config.tau == 1.0 ? f : f.affine(config.tau, 0.0, "tau*" + f.name());
}

MapClass classify_config(const RunConfig& config) {
    const Map w = working_map(config);
    const Interval window = config.classify_window ? *config.classify_window : default_probe_interval(w);
    return classify(w, window, config.classify_grid);
}

std::vector<HistorySpec> default_battery(const RunConfig& config) {
    const Map w = working_map(config);
    const MapClass cls = classify_config(config);
    const Interval iv = invariant_attracting_interval(w, cls);
    std::vector<HistorySpec> out;
    for (double q : {0.1, 0.5, 0.9}) {
        HistorySpec h;
        const double x = iv.lerp(q);
        h.constant = config.wright_y() ? std::expm1(x) : x;
        out.push_back(h);
    }
    return out;
}

std::vector<Trajectory> simulate(const RunConfig& config, double T) {
    const Map f(config.map);
    const std::vector<HistorySpec> battery = config.histories.empty() ? default_battery(config) : config.histories;
    std::vector<std::future<Trajectory>> jobs;
    jobs.reserve(battery.size());
    for (const auto& h : battery)
        jobs.push_back(std::async(std::launch::async, [&config, &f, h, T] { return run_one(config, f, h, T); }));
    std::vector<Trajectory> out;
    out.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i)
        out.push_back(stage("simulate[" + battery[i].label() + "]", [&] { return jobs[i].get(); }));
    return out;
}

Certification certify(const RunConfig& config) {
    Certification cert;
    cert.config = config;
    const Map f = stage("map", [&] { return Map(config.map); });
    cert.map_class = stage("classify", [&] { return classify_config(config); });
    if (cert.map_class.kind == MapKind::Neither && !config.wright_y())
        throw StageError("classify", "map is not an S-map (" + cert.map_class.reason + ")", true);
    cert.pipelines = stage("bounds", [&] { return all_pipelines(f, config.a, config.tau, config.k, config.pipelines); });
    cert.theory = stage("bounds", [&] { return best_bounds(f, config.a, config.tau, config.k, config.pipelines); });
    if (cert.config.histories.empty()) cert.config.histories = stage("battery", [&] { return default_battery(config); });

    const bool stable = cert.theory.verdict == Verdict::GlobalStability;
    double T = config.horizon();
    if (stable) T = std::max(T, std::max(100.0 * config.tau, 200.0));

    const std::vector<Trajectory> trajs = simulate(cert.config, T);

    // g for the invariance check of the tail extrema (a > 0)
    std::optional<Map> g;
    if (config.a > 0.0 && cert.map_class.fixed_point) {
        const Map w = working_map(config);
        g = g_map(w, config.a * config.tau, *cert.map_class.fixed_point);
    }

    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const Trajectory& tr = trajs[i];
        HistoryRun run;
        run.label = cert.config.histories[i].label();
        run.horizon = tr.t_end();
        run.final_value = tr.final_value();
        run.tail = stage("tail[" + run.label + "]", [&] { return tail_stats(tr, config.tail_fraction); });
        if (stable) {
            const bool ok = std::abs(run.final_value - cert.theory.equilibrium) < kContainmentTol;
            run.reached_equilibrium = ok;
            run.contained = ok;
            if (!ok)
                cert.hard_failures.push_back("history " + run.label + ": global stability certified but |x(T) - K| = " +
                                             num(std::abs(run.final_value - cert.theory.equilibrium)));
        } else {
            const Interval& iv = *cert.theory.interval;
            run.slack_lo = run.tail.m - iv.lo;
            run.slack_hi = iv.hi - run.tail.M;
            run.contained = *run.slack_lo >= -kContainmentTol && *run.slack_hi >= -kContainmentTol;
        }
        if (g && g->domain().contains(run.tail.m) && g->domain().contains(run.tail.M)) {
            const Interval img = interval_image(*g, {run.tail.m, run.tail.M}).inflated(kInvarianceTol);
            run.g_invariant = img.contains(Interval{run.tail.m, run.tail.M});
            if (!*run.g_invariant)
                cert.hard_failures.push_back("history " + run.label + ": [m, M] is not inside g([m, M])");
        }
        cert.runs.push_back(std::move(run));
    }
    return cert;
}

void write_certification_json(std::ostream& os, const Certification& cert) {
    nlohmann::json j;
    const RunConfig& c = cert.config;
    j["problem"] = {{"family", family_name(c.map.family)},
                    {"params", c.map.params},
                    {"a", c.a},
                    {"tau", c.tau},
                    {"m_steps", c.m_steps},
                    {"coordinates", c.wright_y() ? "y" : "x"}};
    j["map_class"] = {{"kind", kind_name(cert.map_class.kind)}, {"probe", {cert.map_class.probe.lo, cert.map_class.probe.hi}}};
    if (cert.map_class.fixed_point) j["map_class"]["fixed_point"] = *cert.map_class.fixed_point;
    if (!cert.map_class.reason.empty()) j["map_class"]["reason"] = cert.map_class.reason;
    j["theory"] = report_json(cert.theory);
    j["pipelines"] = nlohmann::json::array();
    for (const auto& r : cert.pipelines) j["pipelines"].push_back(report_json(r));
    j["runs"] = nlohmann::json::array();
    for (const auto& r : cert.runs) {
        nlohmann::json jr = {{"history", r.label},
                             {"T", r.horizon},
                             {"m", r.tail.m},
                             {"M", r.tail.M},
                             {"x_T", r.final_value},
                             {"contained", r.contained}};
        if (r.slack_lo) jr["slack_lo"] = *r.slack_lo;
        if (r.slack_hi) jr["slack_hi"] = *r.slack_hi;
        if (r.reached_equilibrium) jr["reached_equilibrium"] = *r.reached_equilibrium;
        if (r.g_invariant) jr["g_invariant"] = *r.g_invariant;
        j["runs"].push_back(jr);
    }
    j["hard_failures"] = cert.hard_failures;
    j["passed"] = cert.passed();
    os << j.dump(2) << '\n';
}

void write_runs_csv(std::ostream& os, const Certification& cert) {
    os << "history,T,m,M,x_T,contained,slack_lo,slack_hi\n";
    for (const auto& r : cert.runs) {
        os << r.label << ',' << num(r.horizon) << ',' << num(r.tail.m) << ',' << num(r.tail.M) << ','
           << num(r.final_value) << ',' << (r.contained ? "true" : "false") << ','
           << (r.slack_lo ? num(*r.slack_lo) : "") << ',' << (r.slack_hi ? num(*r.slack_hi) : "") << '\n';
    }
}

// ---- reproduction of the worked examples -------------------------------------

Example parse_example(std::string_view id) {
    if (id == "ex1") return Example::Ex1;
    if (id == "ex2") return Example::Ex2;
    if (id == "ex3") return Example::Ex3;
    throw InvalidParameter("unknown example '" + std::string(id) + "' (expected ex1, ex2 or ex3)");
}

namespace {

struct SummaryRow {
    std::string quantity;
    double published;
    double computed;
};

class Writer {
public:
    explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    template <class Fn>
    void file(const std::string& name, Fn&& body) {
        const auto path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        body(os);
        if (!os) throw std::runtime_error("write failed for " + path.string());
        written_.push_back(path);
    }

    void summary(const std::string& prefix, const std::vector<SummaryRow>& rows) {
        file(prefix + "_summary.csv", [&](std::ostream& os) {
            os << "quantity,published,computed,abs_diff\n";
            for (const auto& r : rows)
                os << r.quantity << ',' << num(r.published) << ',' << num(r.computed) << ','
                   << num(std::abs(r.computed - r.published)) << '\n';
        });
    }

    std::vector<std::filesystem::path> done() { return std::move(written_); }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
};

Map mackey_glass() { return Map(MapSpec{Family::MackeyGlassHill, {{"p", 2.0}, {"n", 20.0}}, std::nullopt}); }

void bounds_file(Writer& w, const std::string& name, const std::vector<BoundsReport>& reports) {
    w.file(name, [&](std::ostream& os) {
        write_bounds_csv_header(os);
        for (const auto& r : reports) write_bounds_csv_row(os, r);
    });
}

void trajectory_file(Writer& w, const std::string& name, const Trajectory& tr, std::string_view column) {
    w.file(name, [&](std::ostream& os) { write_trajectory_csv(os, tr, column); });
}

} // namespace

std::vector<std::filesystem::path> reproduce(Example ex, const std::filesystem::path& dir) {
    Writer w(dir);
    constexpr int kSteps = 200;
    switch (ex) {
    case Example::Ex1: {
        const double r = 2.0;
        const Map f(MapSpec{Family::WrightExp, {{"r", r}}, std::nullopt});
        auto reports = all_pipelines(f, 0.0, 1.0);
        reports.push_back(best_bounds(f, 0.0, 1.0));
        bounds_file(w, "ex1_bounds.csv", reports);
        const std::vector<double> histories{0.5, -0.5};
        std::vector<std::future<Trajectory>> jobs;
        for (double y0 : histories)
            jobs.push_back(std::async(std::launch::async,
                                      [=] { return simulate_wright_y(r, History::constant(y0), 60.0, kSteps); }));
        for (std::size_t i = 0; i < jobs.size(); ++i)
            trajectory_file(w, "ex1_solution_" + std::to_string(i + 1) + ".csv", jobs[i].get(), "y");
        const BoundsReport F = wright_F_bounds(r);
        const BoundsReport basic = wright_basic_bounds(r, 0);
        w.summary("ex1", {{"F(-1)", 2.112, F.interval->hi}, {"e^r - 1", 6.389, basic.interval->hi}});
        break;
    }
    case Example::Ex2: {
        const Map f = mackey_glass();
        const BoundsReport fc = f_cycle_bounds(f);
        bounds_file(w, "ex2_bounds.csv", {fc});
        auto run = [&f](double tau, double T) {
            return integrate(DdeProblem{1.0, tau, f, History::constant(0.5)}, T, kSteps);
        };
        auto j1 = std::async(std::launch::async, run, 1.0, 300.0);
        auto j10 = std::async(std::launch::async, run, 10.0, 500.0);
        trajectory_file(w, "ex2_tau1.csv", j1.get(), "x");
        trajectory_file(w, "ex2_tau10.csv", j10.get(), "x");
        const MapClass cls = classify(f);
        const FixedPoint fp = find_fixed_point(f, cls);
        w.summary("ex2", {{"K", 1.0, fp.K},
                          {"f'(K)", -10.0, fp.derivative_at_K},
                          {"alpha", 0.0, fc.interval->lo},
                          {"beta", 2.0, fc.interval->hi}});
        break;
    }
    case Example::Ex3: {
        const Map f = mackey_glass();
        auto reports = all_pipelines(f, 1.0, 1.0);
        reports.push_back(best_bounds(f, 1.0, 1.0));
        bounds_file(w, "ex3_bounds.csv", reports);
        const std::vector<double> histories{0.3, 1.8};
        std::vector<std::future<Trajectory>> jobs;
        for (double x0 : histories)
            jobs.push_back(std::async(std::launch::async, [&f, x0] {
                return integrate(DdeProblem{1.0, 1.0, f, History::constant(x0)}, 300.0, kSteps);
            }));
        for (std::size_t i = 0; i < jobs.size(); ++i)
            trajectory_file(w, "ex3_solution_" + std::to_string(i + 1) + ".csv", jobs[i].get(), "x");
        const BoundsReport gm = g_map_bounds(f, 1.0);
        w.summary("ex3", {{"g(0)", 1.6321, gm.interval->hi},
                          {"g^2(0)", 0.3679, gm.interval->lo},
                          {"h(0)", 1.6071, h_map_bound(f, 1.0)}});
        break;
    }
    }
    return w.done();
}

} // namespace sdde
