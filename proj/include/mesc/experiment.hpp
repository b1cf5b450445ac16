#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mesc/sim.hpp"
#include "mesc/taskset_gen.hpp"

// Campaign driver: sweeps one axis (utilisation, HI proportion, set size),
// generating fresh task sets per point and running every configured variant
// on the same sets with the same disturbance seeds, so variant curves are
// paired.  Results reduce to one row per (axis value, variant).

namespace mesc {

struct VariantSpec {
    std::string name;
    Policy policy = Policy::Mesc;
    PreemptionMode preemption = PreemptionMode::Instruction;
    bool bank_model = true;
};

struct ExperimentSpec {
    std::vector<double> util_grid{0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
    std::vector<double> gamma_grid;  // optional sweep, run at gamma_util
    double gamma_util = 0.7;
    std::vector<int> beta_grid;  // optional sweep, run at beta_util
    double beta_util = 0.7;
    int sets_per_point = 100;
    GenParams gen;  // axis fields overridden per point
    SystemParams sys;
    CostProfile profile;
    double overrun_prob = 0.05;
    double overrun_scale = 1.3;
    Cycles horizon = 0;  // 0 = simulator default
    std::vector<VariantSpec> variants{
        {"mesc-instr", Policy::Mesc, PreemptionMode::Instruction, true},
        {"mesc-nonpreempt", Policy::Mesc, PreemptionMode::None, true},
    };
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0 = hardware concurrency
};

struct PointStats {
    std::string axis;  // "util" | "gamma" | "beta"
    double value = 0.0;
    std::string variant;
    int sets = 0;
    int analysis_schedulable = 0;
    int sim_success = 0;
    double success_ratio = 0.0;
    double survivability = 0.0;  // mean over runs that saw a HI episode
    int survivability_runs = 0;
    Cycles mean_pi = 0, max_pi = 0;
    Cycles mean_ci = 0, max_ci = 0;
    Cycles mean_save = 0, mean_restore = 0;
};

struct ExperimentResult {
    std::vector<PointStats> util_rows;
    std::vector<PointStats> gamma_rows;
    std::vector<PointStats> beta_rows;
};

// Stable seed derivation so any (point, set) pair can be re-run in isolation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Partial JSON overrides the defaults above; unknown keys are rejected by
// their sub-parsers where they would silently change semantics.
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);

std::string points_to_csv(const std::vector<PointStats>& rows);

// Minimal deterministic SVG line chart of success ratio (or survivability)
// per variant over the axis.
std::string render_curves_svg(const std::string& title,
                              const std::vector<PointStats>& rows,
                              bool survivability = false);

}  // namespace mesc
