#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mesc/analysis.hpp"
#include "mesc/bank_alloc.hpp"
#include "mesc/sim.hpp"
#include "mesc/task.hpp"
#include "mesc/taskset_gen.hpp"

// On-disk formats.  JSON for task sets, configs and metric records; CSV with
// a `#schema` comment line for tabular reports.  Serialization is
// deterministic: the same inputs produce byte-identical files.

namespace mesc {

using json = nlohmann::json;

// ---- task sets ----

json taskset_to_json(const TaskSet& ts, const SystemParams& sys, std::uint64_t seed);
// Throws std::invalid_argument on schema mismatch or malformed content.
TaskSet taskset_from_json(const json& doc, SystemParams* sys_out = nullptr,
                          std::uint64_t* seed_out = nullptr);

void save_taskset_file(const std::string& path, const TaskSet& ts,
                       const SystemParams& sys, std::uint64_t seed);
TaskSet load_taskset_file(const std::string& path, SystemParams* sys_out = nullptr,
                          std::uint64_t* seed_out = nullptr);

// ---- configs (partial JSON overrides defaults) ----

SystemParams sysparams_from_json(const json& j);
CostProfile costprofile_from_json(const json& j);
GenParams genparams_from_json(const json& j);

// ---- reports ----

std::string analysis_to_csv(const AnalysisResult& res);
std::string events_to_csv(const std::vector<TraceEvent>& events);
json metrics_to_json(const SimMetrics& m, const SimConfig& cfg);

// Bank-count/exec-time profile for the profiled allocation rule.  Expects a
// `#schema mesc-bank-profile v1` line, then `banks,exec_cycles` rows.
std::vector<ProfilePoint> profile_points_from_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mesc
