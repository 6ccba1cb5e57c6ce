#pragma once

// Cross-checks the bound pipelines against simulation.

#include "sdde/bounds.hpp"
#include "sdde/config.hpp"
#include "sdde/ddesim.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdde {

/// Absolute tolerance on containment and on convergence to the equilibrium.
inline constexpr double kContainmentTol = 1e-3;
/// Inflation used for the [m, M] subset g([m, M]) check.
inline constexpr double kInvarianceTol = 1e-6;

struct HistoryRun {
    std::string label;
    TailStats tail;
    double final_value = 0.0;
    double horizon = 0.0;
    bool contained = false;
    std::optional<double> slack_lo; // m - lo
    std::optional<double> slack_hi; // hi - M
    std::optional<bool> reached_equilibrium; // global stability verdicts only
    std::optional<bool> g_invariant;         // a > 0: [m, M] inside g([m, M])
};

struct Certification {
    RunConfig config;
    MapClass map_class;
    BoundsReport theory;
    std::vector<BoundsReport> pipelines;
    std::vector<HistoryRun> runs;
    std::vector<std::string> hard_failures;

    [[nodiscard]] bool all_contained() const noexcept;
    [[nodiscard]] bool passed() const noexcept { return all_contained() && hard_failures.empty(); }
};

/// The map the bound pipelines see after rescaling: f/a (a > 0) or tau f (a = 0).
[[nodiscard]] Map working_map(const RunConfig& config);

/// Classification of the working map on the configured window.
[[nodiscard]] MapClass classify_config(const RunConfig& config);

/// Constant histories at the 0.1, 0.5, 0.9 quantiles of the invariant interval
/// (in y for the Wright problem).
[[nodiscard]] std::vector<HistorySpec> default_battery(const RunConfig& config);

/// One trajectory per history, in config order; runs in parallel.
[[nodiscard]] std::vector<Trajectory> simulate(const RunConfig& config, double T);

/// Errors are rethrown as StageError naming the failing stage.
[[nodiscard]] Certification certify(const RunConfig& config);

void write_certification_json(std::ostream& os, const Certification& cert);
void write_runs_csv(std::ostream& os, const Certification& cert);

enum class Example { Ex1, Ex2, Ex3 };
[[nodiscard]] Example parse_example(std::string_view id);

/// Writes trajectory CSVs, bounds.csv and summary.csv into `dir`; returns the
/// files written. Output is byte-identical across runs.
std::vector<std::filesystem::path> reproduce(Example ex, const std::filesystem::path& dir);

} // namespace sdde
