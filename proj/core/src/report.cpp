#include "rnla/report.hpp"

#include <cmath>
#include <json.hpp>
#include <set>

#include "rnla/error.hpp"

namespace rnla {

namespace {

using nlohmann::json;

json metric_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double metric_from(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error("parse", "bad metric value: " + s);
    }
    return j.get<double>();
}

}  // namespace

std::string RunReport::to_json() const {
    json j;
    j["schema"] = kSchemaVersion;
    j["task"] = task;
    j["seed"] = seed;
    j["params"] = params;
    j["rows_in"] = rows_in;
    j["cols_in"] = cols_in;
    j["rows_out"] = rows_out;
    json m = json::object();
    for (const auto& [k, v] : metrics) m[k] = metric_value(v);
    j["metrics"] = m;
    if (runtime_ms >= 0.0) j["runtime_ms"] = runtime_ms;
    j["pass"] = pass;
    j["flags"] = flags;
    return j.dump(2);
}

RunReport RunReport::from_json(const std::string& text) {
    json j = json::parse(text);
    static const std::set<std::string> known = {
        "schema", "task", "seed", "params", "rows_in", "cols_in",
        "rows_out", "metrics", "runtime_ms", "pass", "flags"};
    for (auto it = j.begin(); it != j.end(); ++it)
        require(known.count(it.key()) > 0, "parse",
                "unknown report field: " + it.key());
    require(j.at("schema").get<int>() == kSchemaVersion, "parse",
            "unsupported report schema version");

    RunReport r;
    r.task = j.at("task").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = j.at("params").get<std::map<std::string, double>>();
    r.rows_in = j.at("rows_in").get<std::size_t>();
    r.cols_in = j.at("cols_in").get<std::size_t>();
    r.rows_out = j.at("rows_out").get<std::size_t>();
    for (const auto& [k, v] : j.at("metrics").items())
        r.metrics[k] = metric_from(v);
    if (j.contains("runtime_ms")) r.runtime_ms = j.at("runtime_ms").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
    return r;
}

}  // namespace rnla
