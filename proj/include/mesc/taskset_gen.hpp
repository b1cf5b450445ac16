#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mesc/task.hpp"
#include "mesc/trace.hpp"
#include "mesc/types.hpp"

// Random workload generation for the experiment campaigns: UUnifast
// utilisations, periods derived from sampled budgets, rate-monotonic
// priorities, and synthetic instruction traces sized to the budget.

namespace mesc {

struct GenParams {
    int n_tasks = 10;              // set size (beta)
    double total_util = 0.5;       // LO-mode utilisation target (U)
    double crit_factor = 2.0;      // c_hi = crit_factor * c_lo for HI tasks
    double crit_proportion = 0.5;  // fraction of HI tasks (gamma)
    double acc_proportion = 1.0;   // fraction of accelerator tasks
    Cycles c_lo_min = 50000;       // sampled budget range, cycles
    Cycles c_lo_max = 5000000;
    // Log-uniform budget sampling spreads budgets across the orders of
    // magnitude the range spans, like a workload mixing small kernels with
    // heavy ones; the default keeps the plain uniform draw.
    bool c_lo_log_uniform = false;
    Cycles footprint_min = 8 * 1024;   // accelerator input volume range, bytes
    Cycles footprint_max = 96 * 1024;

    void validate() const;
};

// Unbiased utilisation split: n values summing to total_util, each in
// (0, total_util).  Consumes n-1 uniform draws from rng.
std::vector<double> uunifast(int n, double total_util, std::mt19937_64& rng);

// Same recurrence with the uniform draws supplied by the caller; the
// random-free core that tests can pin exactly.  draws.size() must be n-1.
std::vector<double> uunifast_from_draws(int n, double total_util,
                                        const std::vector<double>& draws);

// Deterministic in (params, seed).  Task ids are 1..n; priorities are
// rate-monotonic (shorter period wins, ties broken by id).
TaskSet generate(const GenParams& params, const SystemParams& sys,
                 const CostProfile& profile, std::uint64_t seed);

}  // namespace mesc
