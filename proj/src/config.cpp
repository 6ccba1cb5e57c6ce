#include "sdde/config.hpp"

#include "sdde/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdde {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ConfigError(what + " must be a number");
}

double finite_number(const json& j, const std::string& what) {
    const double v = number(j, what);
    if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
    return v;
}

HistorySpec parse_history(const json& j, std::size_t index) {
    const std::string what = "histories[" + std::to_string(index) + "]";
    HistorySpec h;
    if (j.is_number()) {
        h.constant = finite_number(j, what);
        return h;
    }
    if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a number or a list of [t, value] pairs");
    for (const auto& pt : j) {
        if (!pt.is_array() || pt.size() != 2) throw ConfigError(what + ": each point must be [t, value]");
        h.points.emplace_back(finite_number(pt[0], what + " time"), finite_number(pt[1], what + " value"));
    }
    return h;
}

} // namespace

History HistorySpec::to_history() const {
    if (constant) return History::constant(*constant);
    return History::polyline(points);
}

std::string HistorySpec::label() const {
    char buf[48];
    if (constant) {
        std::snprintf(buf, sizeof buf, "%.15g", *constant);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "polyline(%zu)", points.size());
    return buf;
}

double RunConfig::horizon() const { return T ? *T : std::max(100.0 * tau, 200.0); }

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const char* known[] = {"map", "a", "tau", "histories", "T", "m_steps", "tail_fraction",
                                  "k", "classify", "pipelines", "output_dir"};
    for (const auto& [key, _] : j.items())
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ConfigError("unknown config key '" + key + "'");

    RunConfig c;
    if (!j.contains("map") || !j["map"].is_object()) throw ConfigError("config needs a 'map' object");
    const json& m = j["map"];
    if (!m.contains("family") || !m["family"].is_string()) throw ConfigError("map.family must be a string");
    try {
        c.map.family = parse_family(m["family"].get<std::string>());
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }
    if (m.contains("params")) {
        if (!m["params"].is_object()) throw ConfigError("map.params must be an object of numbers");
        for (const auto& [name, v] : m["params"].items()) c.map.params[name] = finite_number(v, "map.params." + name);
    }
    if (m.contains("domain")) {
        const json& d = m["domain"];
        if (!d.is_array() || d.size() != 2) throw ConfigError("map.domain must be [lo, hi]");
        c.map.domain = Interval{number(d[0], "map.domain lo"), number(d[1], "map.domain hi")};
    }

    if (j.contains("a")) c.a = finite_number(j["a"], "a");
    if (j.contains("tau")) c.tau = finite_number(j["tau"], "tau");
    if (j.contains("T")) c.T = finite_number(j["T"], "T");
    if (j.contains("m_steps")) {
        if (!j["m_steps"].is_number_integer()) throw ConfigError("m_steps must be an integer");
        c.m_steps = j["m_steps"].get<int>();
    }
    if (j.contains("tail_fraction")) c.tail_fraction = finite_number(j["tail_fraction"], "tail_fraction");
    if (j.contains("k")) {
        if (!j["k"].is_number_integer()) throw ConfigError("k must be an integer");
        c.k = j["k"].get<int>();
    }
    if (j.contains("classify")) {
        const json& cl = j["classify"];
        if (!cl.is_object()) throw ConfigError("classify must be an object");
        if (cl.contains("grid")) {
            if (!cl["grid"].is_number_integer()) throw ConfigError("classify.grid must be an integer");
            c.classify_grid = cl["grid"].get<int>();
        }
        if (cl.contains("window")) {
            const json& w = cl["window"];
            if (!w.is_array() || w.size() != 2) throw ConfigError("classify.window must be [lo, hi]");
            c.classify_window = Interval{finite_number(w[0], "classify.window lo"), finite_number(w[1], "classify.window hi")};
        }
    }
    if (j.contains("histories")) {
        if (!j["histories"].is_array()) throw ConfigError("histories must be a list");
        for (std::size_t i = 0; i < j["histories"].size(); ++i) c.histories.push_back(parse_history(j["histories"][i], i));
    }
    if (j.contains("pipelines")) {
        const json& p = j["pipelines"];
        if (!p.is_object()) throw ConfigError("pipelines must be an object of booleans");
        auto flag = [&](const char* name, bool& slot) {
            if (!p.contains(name)) return;
            if (!p[name].is_boolean()) throw ConfigError(std::string("pipelines.") + name + " must be true or false");
            slot = p[name].get<bool>();
        };
        flag("wright_basic", c.pipelines.wright_basic);
        flag("wright_f", c.pipelines.wright_f);
        flag("f_cycle", c.pipelines.f_cycle);
        flag("g_map", c.pipelines.g_map);
        flag("h_map", c.pipelines.h_map);
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("output_dir must be a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }

    // validation before any computation
    if (!(c.a >= 0.0)) throw ConfigError("a must be >= 0");
    if (!(c.tau > 0.0)) throw ConfigError("tau must be > 0");
    if (c.T && !(*c.T > 0.0)) throw ConfigError("T must be > 0");
    if (c.m_steps < 20) throw ConfigError("m_steps must be at least 20");
    if (!(c.tail_fraction > 0.0 && c.tail_fraction < 1.0)) throw ConfigError("tail_fraction must lie in (0, 1)");
    if (c.k < 0) throw ConfigError("k must be >= 0");
    if (c.classify_grid < 64) throw ConfigError("classify.grid must be at least 64");
    if (c.horizon() < 10.0 * c.tau) throw ConfigError("T must cover at least 10 delays");
    try {
        (void)Map(c.map);
        for (const auto& h : c.histories)
            if (!h.constant) (void)h.to_history();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace sdde
