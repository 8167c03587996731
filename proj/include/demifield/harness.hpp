#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "demifield/checks.hpp"
#include "demifield/stats.hpp"

namespace demifield {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON codecs. Generator objects follow the pinned schema
// {"model": "...", "dist": "...", "box": [..], "kernel": [[..]], "c": x};
// keys irrelevant to the model are omitted, and the kernel nests one array
// level per lattice dimension. Reports are emitted with sorted keys and are
// byte-stable across reruns and worker counts.
Json generator_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_from_json(const Json& j);

Json check_config_to_json(const CheckConfig& cfg);
CheckConfig check_config_from_json(const Json& j);

Json report_to_json(const InequalityReport& rep);
Json trend_to_json(const TrendReport& trend);
Json upcross_to_json(const UpcrossReport& rep);

// ---------------------------------------------------------------------------
// Check registry: string ids for every check operation, trend checks
// included. run_check dispatches one configured check and returns either the
// inequality reports or the trend report.
struct CheckRun {
    std::vector<InequalityReport> reports;
    std::optional<TrendReport> trend;
};

const std::vector<std::string>& check_ids();
bool is_trend_check(const std::string& id);
CheckRun run_check(const std::string& id, const CheckConfig& cfg);

// ---------------------------------------------------------------------------
// Suite runner.
struct SuiteEntry {
    std::string check;   // registry id
    std::string label;   // unique name for output files / CSV rows
    CheckConfig config;
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::uint64_t replicates = 10000;
    double z = 3.0;
    int workers = 0;
    std::vector<SuiteEntry> entries;

    void validate() const;  // replicates >= 2, z > 0, labels unique
};

// Parses {"seed":..,"replicates":..,"z":..,"workers":..,"checks":[{"check":
// id, "label":.., "config":{..}}]}. Entry configs inherit the suite-level
// replicates/z/workers when omitted; a missing entry seed derives from the
// suite seed and the entry index.
RunConfig run_config_from_json(const Json& j);

// The built-in suite: every check on its documented example configurations
// (fixed seeds, HOLD expected everywhere); trend checks run at a tenth of the
// replicate budget. The deliberately failing control is not included — it is
// its own registry entry for explicit runs.
RunConfig default_run_config(std::uint64_t replicates = 100000);

struct SuiteResult {
    Json report;              // the full suite document
    std::string summary_csv;  // lossy per-row projection
    int exit_code = 0;        // 0 all HOLD, 1 any VIOLATION, 2 any error
};

SuiteResult run_suite(const RunConfig& cfg);

// CSV dump of one field realization: one row per cell, coordinates then the
// value, in enumeration order.
std::string field_csv(const FieldSample& field);

}  // namespace demifield
