#pragma once

// Run configuration, read from a JSON file.
//
//   {
//     "map": {"family": "MackeyGlassHill", "params": {"p": 2, "n": 20},
//             "domain": [0, "inf"]},
//     "a": 1, "tau": 1,
//     "histories": [0.3, 1.8, [[-1, 0.2], [0, 0.9]]],
//     "T": 300, "m_steps": 200, "tail_fraction": 0.2, "k": 3,
//     "classify": {"grid": 2048, "window": [0, 3]},
//     "pipelines": {"wright_basic": true, "wright_f": true, "f_cycle": true,
//                   "g_map": true, "h_map": true},
//     "output_dir": "out"
//   }
//
// A history is a number (constant) or a list of [t, value] pairs (polyline).
// For WrightExp with a = 0 the histories and reports are in y = e^x - 1.

#include "sdde/bounds.hpp"
#include "sdde/ddesim.hpp"
#include "sdde/maps.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sdde {

struct HistorySpec {
    std::optional<double> constant;
    std::vector<std::pair<double, double>> points; // polyline when constant is empty

    [[nodiscard]] History to_history() const;
    [[nodiscard]] std::string label() const;
};

struct RunConfig {
    MapSpec map;
    double a = 1.0;
    double tau = 1.0;
    std::vector<HistorySpec> histories; // empty: default battery
    std::optional<double> T;            // empty: max(100 tau, 200)
    int m_steps = 200;
    double tail_fraction = 0.2;
    int k = 3;
    int classify_grid = 2048;
    std::optional<Interval> classify_window;
    PipelineToggles pipelines;
    std::string output_dir = "out";

    /// True for the Wright problem in y = e^x - 1 coordinates.
    [[nodiscard]] bool wright_y() const noexcept { return map.family == Family::WrightExp && a == 0.0; }
    [[nodiscard]] double horizon() const;
};

/// Parses and validates; throws ConfigError on any problem.
[[nodiscard]] RunConfig parse_config(const std::string& json_text);
[[nodiscard]] RunConfig load_config(const std::string& path);

} // namespace sdde
