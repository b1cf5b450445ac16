#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mesc/accelerator.hpp"
#include "mesc/task.hpp"
#include "mesc/types.hpp"

// Deterministic discrete-event simulation of one task set on the CPU +
// accelerator pair.  The two form a single serially-used engine: at most one
// job advances at a time, matching the response-time model.  Decisions happen
// at scheduler ticks (every t_sr cycles) and at interrupts (job completion,
// budget-overrun timer); job releases become visible at the next decision.
//
// Mode protocol: LO mode schedules purely by priority.  A HI job exhausting
// its budget without finishing trips the transition: HI jobs get strict
// preference, LO jobs may run only to drain their still-resident scratchpad
// data, and once at most one LO task's data remains the system is in HI mode.
// HI mode ends when no released job is left.  The degraded policy instead
// drops every LO job at the transition and keeps dropping LO releases until
// the mode clears.

namespace mesc {

enum class PreemptionMode { None, Limited, Instruction };
enum class Policy { Mesc, Amc };
enum class Mode { Lo, Transition, Hi };

const char* to_string(PreemptionMode m);
const char* to_string(Policy p);
const char* to_string(Mode m);
PreemptionMode preemption_from_string(const std::string& s);  // throws on junk
Policy policy_from_string(const std::string& s);

struct SimConfig {
    Cycles horizon = 0;  // 0 = 20 x largest period
    std::uint64_t seed = 1;
    PreemptionMode preemption = PreemptionMode::Instruction;
    Policy policy = Policy::Mesc;
    bool bank_model = true;
    double overrun_prob = 0.0;   // per HI job
    double overrun_scale = 2.0;  // overrun demand = min(scale * c_lo, c_hi)
    bool record_events = false;
    SystemParams sys;
    CostProfile profile;

    void validate() const;
};

struct LevelCounts {
    long released = 0;
    long completed = 0;
    long missed = 0;
    long dropped = 0;
    long in_flight = 0;  // incomplete at horizon with deadline still ahead

    bool operator==(const LevelCounts&) const = default;
};

struct TraceEvent {
    Cycles t = 0;
    std::string kind;
    TaskId task = 0;
    Cycles value = 0;

    bool operator==(const TraceEvent&) const = default;
};

struct SimMetrics {
    Cycles horizon = 0;
    LevelCounts lo, hi;
    long mode_switches = 0;  // LO -> transition trips
    long engine_saves = 0;   // accelerator context saves
    long lo_released_in_hi = 0;   // LO jobs released while not in LO mode
    long lo_completed_in_hi = 0;  // ... of those, completed
    std::vector<Cycles> pi_inversions;  // per-episode durations
    std::vector<Cycles> ci_inversions;
    std::vector<Cycles> save_cycles;     // per accelerator save, incl. evictions
    std::vector<Cycles> restore_cycles;  // per accelerator restore
    Cycles max_observed_drain = 0;
    std::vector<TraceEvent> events;  // only when record_events

    bool operator==(const SimMetrics&) const = default;

    bool success() const { return lo.missed == 0 && hi.missed == 0; }
    // LO service retained through HI episodes; nullopt when none occurred.
    std::optional<double> survivability() const {
        if (lo_released_in_hi == 0) return std::nullopt;
        return double(lo_completed_in_hi) / double(lo_released_in_hi);
    }
};

Cycles mean_cycles(const std::vector<Cycles>& v);  // 0 for empty
Cycles max_cycles(const std::vector<Cycles>& v);   // 0 for empty

SimMetrics simulate(const TaskSet& ts, const SimConfig& cfg);

}  // namespace mesc
