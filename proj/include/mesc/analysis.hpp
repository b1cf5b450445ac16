#pragma once

#include <optional>
#include <vector>

#include "mesc/task.hpp"
#include "mesc/types.hpp"

// Static worst-case response-time analysis for the three phases a job can
// live through: steady LO mode, steady HI mode, and the transition window
// where carried-over LO jobs still interfere.  All recurrences are solved by
// ascending fixed-point iteration over exact integers; a fixed point above
// the deadline (or outright divergence) reports "unschedulable" rather than
// a number.
//
// Blocking terms follow the engine's preemption protocol: a higher-priority
// arrival waits for at most one in-flight instruction of a lower-priority
// task plus one scheduler period before the check notices it.

namespace mesc {

// ---- blocking bounds ----

// LO mode: any lower-priority task (either level) may occupy the engine.
Cycles pi_blocking_lo(const TaskSet& ts, TaskId pivot, const SystemParams& sys);
Cycles total_blocking_lo(const TaskSet& ts, TaskId pivot, const SystemParams& sys);

// HI mode, HI pivot: lower-priority HI tasks cause priority blocking; LO
// tasks of any priority run only while HI tasks idle, so any of them can be
// the one draining when a HI job arrives (criticality blocking).
Cycles pi_blocking_hi(const TaskSet& ts, TaskId pivot, const SystemParams& sys);
Cycles ci_blocking_hi(const TaskSet& ts, TaskId pivot, const SystemParams& sys);
Cycles total_blocking_hi(const TaskSet& ts, TaskId pivot, const SystemParams& sys);

// ---- response times ----

// Everyone, budgeted (LO) execution and full higher-priority interference.
std::optional<Cycles> response_time_lo(const TaskSet& ts, TaskId pivot,
                                       const SystemParams& sys);

// HI pivot, steady HI mode: overrun execution, interference from
// higher-priority HI tasks only.  Throws std::invalid_argument on a LO pivot.
std::optional<Cycles> response_time_hi(const TaskSet& ts, TaskId pivot,
                                       const SystemParams& sys);

// HI pivot, mode-transition bound: higher-priority LO tasks contribute the
// arrivals of one LO-mode busy window (r_lo_pivot, held constant through the
// iteration); higher-priority HI tasks contribute at their overrun budgets.
std::optional<Cycles> response_time_star(const TaskSet& ts, TaskId pivot,
                                         const SystemParams& sys,
                                         Cycles r_lo_pivot);

// ---- whole-set verdict ----

struct TaskAnalysis {
    TaskId id = 0;
    CritLevel level = CritLevel::Lo;
    Cycles pb_lo = 0;
    Cycles b_lo = 0;
    std::optional<Cycles> r_lo;
    Cycles pb_hi = 0;  // HI tasks only; zero otherwise
    Cycles cb_hi = 0;
    Cycles b_hi = 0;
    std::optional<Cycles> r_hi;
    std::optional<Cycles> r_star;

    bool schedulable() const;
};

struct AnalysisResult {
    std::vector<TaskAnalysis> rows;  // ascending task id
    bool schedulable = false;

    const TaskAnalysis& row_for(TaskId id) const;
};

AnalysisResult analyze(const TaskSet& ts, const SystemParams& sys);

}  // namespace mesc
