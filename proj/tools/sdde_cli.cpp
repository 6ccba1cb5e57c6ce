// Command-line front end: analyze, bounds, simulate, stability, certify, reproduce.
// Exit codes: 0 success, 1 containment failure, 2 invalid input.

#include "sdde/certify.hpp"
#include "sdde/errors.hpp"
#include "sdde/linstab.hpp"
#include "sdde/onedim.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kContainmentFailure = 1;
constexpr int kInvalidInput = 2;

void print_interval(const char* label, const sdde::Interval& iv) {
    std::printf("%s[%.10g, %.10g]\n", label, iv.lo, iv.hi);
}

void print_report(const sdde::BoundsReport& r) {
    std::printf("%-12s %-18s margin %.10g (threshold %.4g)", std::string(sdde::pipeline_name(r.pipeline)).c_str(),
                std::string(sdde::verdict_name(r.verdict)).c_str(), r.stability_margin, r.threshold);
    if (r.interval) std::printf("  [%.10g, %.10g]", r.interval->lo, r.interval->hi);
    if (r.cycle) std::printf("  cycle {%.10g, %.10g}", r.cycle->lo, r.cycle->hi);
    std::printf("%s\n", r.coordinates == sdde::Coordinates::Y ? "  (y)" : "");
    for (const auto& p : r.provenance) std::printf("    %s\n", p.c_str());
}

int analyze(const std::string& path) {
    const sdde::RunConfig cfg = sdde::load_config(path);
    const sdde::Map w = sdde::working_map(cfg);
    const sdde::MapClass cls = sdde::classify_config(cfg);
    std::printf("map          %s\n", w.name().c_str());
    std::printf("class        %s\n", std::string(sdde::kind_name(cls.kind)).c_str());
    print_interval("probe        ", cls.probe);
    if (cls.kind == sdde::MapKind::Neither) {
        std::printf("witness      %.10g (%s)\n", cls.witness.value_or(NAN), cls.reason.c_str());
        return kOk;
    }
    if (cls.critical_point) std::printf("critical     %.10g\n", *cls.critical_point);
    if (cls.finite_limit) std::printf("limit        %.10g\n", *cls.finite_limit);
    try {
        print_interval("invariant    ", sdde::invariant_attracting_interval(w, cls));
        const sdde::DichotomyVerdict v = sdde::singer_dichotomy(w, cls);
        std::printf("K            %.15g\n", v.fixed_point.K);
        std::printf("f'(K)        %.15g\n", v.fixed_point.derivative_at_K);
        std::printf("dichotomy    %s\n", std::string(sdde::case_name(v.kind)).c_str());
        if (v.two_cycle) std::printf("2-cycle      {%.15g, %.15g}\n", v.two_cycle->alpha, v.two_cycle->beta);
    } catch (const sdde::NotApplicable& e) {
        std::printf("note         %s\n", e.what());
    } catch (const sdde::NotDecidable& e) {
        std::printf("note         %s\n", e.what());
    }
    return kOk;
}

int bounds(const std::string& path, bool csv) {
    const sdde::RunConfig cfg = sdde::load_config(path);
    const sdde::Map f(cfg.map);
    const auto reports = sdde::all_pipelines(f, cfg.a, cfg.tau, cfg.k, cfg.pipelines);
    const auto best = sdde::best_bounds(f, cfg.a, cfg.tau, cfg.k, cfg.pipelines);
    if (csv) {
        sdde::write_bounds_csv_header(std::cout);
        for (const auto& r : reports) sdde::write_bounds_csv_row(std::cout, r);
        sdde::write_bounds_csv_row(std::cout, best);
        return kOk;
    }
    for (const auto& r : reports) print_report(r);
    print_report(best);
    return kOk;
}

int simulate(const std::string& path, std::size_t stride) {
    sdde::RunConfig cfg = sdde::load_config(path);
    if (cfg.histories.empty()) cfg.histories = sdde::default_battery(cfg);
    const auto trajs = sdde::simulate(cfg, cfg.horizon());
    std::filesystem::create_directories(cfg.output_dir);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const auto file = std::filesystem::path(cfg.output_dir) / ("trajectory_" + std::to_string(i + 1) + ".csv");
        std::ofstream os(file, std::ios::binary);
        sdde::write_trajectory_csv(os, trajs[i], cfg.wright_y() ? "y" : "x", stride);
        std::printf("%s  history %s\n", file.string().c_str(), cfg.histories[i].label().c_str());
    }
    return kOk;
}

int stability(double a, double b, double tau) {
    const auto res = sdde::analyze_stability({a, b, tau});
    if (res.tau0)
        std::printf("tau0         %.15g\n", *res.tau0);
    else
        std::printf("tau0         none (|b| <= a: stable for every delay)\n");
    std::printf("N            %d\n", res.unstable_pairs);
    std::printf("verdict      %s\n", res.locally_stable ? "locally stable" : "unstable");
    return kOk;
}

int certify(const std::string& path) {
    const sdde::RunConfig cfg = sdde::load_config(path);
    const sdde::Certification cert = sdde::certify(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    const auto dir = std::filesystem::path(cfg.output_dir);
    {
        std::ofstream os(dir / "certification.json", std::ios::binary);
        sdde::write_certification_json(os, cert);
    }
    {
        std::ofstream os(dir / "runs.csv", std::ios::binary);
        sdde::write_runs_csv(os, cert);
    }
    print_report(cert.theory);
    for (const auto& r : cert.runs) {
        std::printf("history %-22s [m, M] = [%.8g, %.8g]  x(T) = %.8g  %s\n", r.label.c_str(), r.tail.m, r.tail.M,
                    r.final_value, r.contained ? "contained" : "NOT CONTAINED");
    }
    for (const auto& h : cert.hard_failures) std::printf("FAILURE: %s\n", h.c_str());
    std::printf("%s\n", cert.passed() ? "certified" : "certification failed");
    return cert.passed() ? kOk : kContainmentFailure;
}

int reproduce(const std::string& example, const std::string& out) {
    for (const auto& p : sdde::reproduce(sdde::parse_example(example), out)) std::printf("%s\n", p.string().c_str());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attractor bounds and simulation for x' = -a x + f(x(t - tau))"};
    app.require_subcommand(1);

    std::string config;
    bool csv = false;
    std::size_t stride = 1;
    double a = 0.0, b = 0.0, tau = 1.0;
    std::string example, out = "out";

    auto* an = app.add_subcommand("analyze", "classify the map, fixed point and 2-cycle");
    an->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    auto* bo = app.add_subcommand("bounds", "every bound pipeline and their intersection");
    bo->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    bo->add_flag("--csv", csv, "CSV rows instead of text");
    auto* si = app.add_subcommand("simulate", "write trajectory CSVs to output_dir");
    si->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    si->add_option("--stride", stride, "write every n-th grid node")->check(CLI::PositiveNumber);
    auto* st = app.add_subcommand("stability", "critical delay and unstable root count of the linearization");
    st->add_option("--a", a, "decay rate a >= 0")->required();
    st->add_option("--b", b, "feedback slope f'(K) < 0")->required();
    st->add_option("--tau", tau, "delay")->required();
    auto* ce = app.add_subcommand("certify", "bounds vs. simulation; exit 0 iff every history is contained");
    ce->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    auto* re = app.add_subcommand("reproduce", "regenerate the data of a worked example");
    re->add_option("--example", example, "ex1, ex2 or ex3")->required()->check(CLI::IsMember({"ex1", "ex2", "ex3"}));
    re->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidInput;
    }

    try {
        if (*an) return analyze(config);
        if (*bo) return bounds(config, csv);
        if (*si) return simulate(config, stride);
        if (*st) return stability(a, b, tau);
        if (*ce) return certify(config);
        if (*re) return reproduce(example, out);
    } catch (const sdde::StageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.invalid_input() ? kInvalidInput : kContainmentFailure;
    } catch (const sdde::ConfigError& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return kInvalidInput;
    } catch (const sdde::InvalidParameter& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kContainmentFailure;
    }
    return kInvalidInput;
}
