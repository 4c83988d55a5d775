#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rnla {

// Per-task run record with a stable, versioned JSON schema. Metrics are
// finite doubles or explicit "inf"; runtime is omitted entirely under
// --no-timing so reports stay byte-identical across repeat runs.
struct RunReport {
    static constexpr int kSchemaVersion = 1;

    std::string task;  // embed | levscore | basis | regress | selftest | bench
    std::uint64_t seed = 0;
    std::map<std::string, double> params;
    std::size_t rows_in = 0;
    std::size_t cols_in = 0;
    std::size_t rows_out = 0;
    std::map<std::string, double> metrics;
    double runtime_ms = -1.0;  // negative = not recorded
    bool pass = false;
    std::vector<std::string> flags;  // "not-converged", "fallback", ...

    std::string to_json() const;

    // Parses a schema-v1 report; unknown fields are rejected.
    static RunReport from_json(const std::string& text);
};

}  // namespace rnla
