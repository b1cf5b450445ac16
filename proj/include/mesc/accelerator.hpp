#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "mesc/task.hpp"
#include "mesc/trace.hpp"
#include "mesc/types.hpp"

// Behavioural model of the preemptible streaming accelerator: the pieces of
// micro-architecture that matter for context-switch timing.  No data values
// are modelled, only occupancy and cost.
//
//   - config copy buffer: one slot per config class, newest write wins, saved
//     and replayed wholesale at switch time;
//   - banked scratchpad with per-bank locks and a remapping table, so a
//     preempted task's input data can stay resident while others run;
//   - a single in-flight instruction (issue freezes, the instruction drains);
//   - an issue queue whose un-acknowledged entries are re-dispatched on resume.

namespace mesc {

class AllocationError : public std::runtime_error {
public:
    explicit AllocationError(const std::string& w) : std::runtime_error(w) {}
};

class MappingError : public std::runtime_error {
public:
    explicit MappingError(const std::string& w) : std::runtime_error(w) {}
};

// What a preempted job needs to resume: banks to re-fetch (zero when its data
// stayed resident), configs to replay, issue-queue entries to re-dispatch.
struct SavedContext {
    int banks_to_reload = 0;
    Cycles bytes_to_reload = 0;
    int cfg_count = 0;
    int queued = 0;
};

struct SaveCost {
    Cycles cycles = 0;
    bool evict = false;      // outgoing task's banks are moved out
    int evicted_banks = 0;
};

struct ResidencyInfo {
    int banks = 0;
    Cycles bytes = 0;
};

class AcceleratorState {
public:
    static constexpr Cycles kConfigBufferBytes = 64;
    static constexpr Cycles kRemapEntryBytes = 16;

    AcceleratorState(const SystemParams& sys, const CostProfile& profile,
                     bool bank_model = true);

    // ---- config copy buffer ----
    void record_config(ConfigClass cls);  // newest per class overwrites
    int configs_recorded() const;

    // ---- remapper + banklocks ----
    // Appends `bytes` of task data, locking banks as they fill.  The caller
    // passes the task's bank reservation; exceeding it, running out of banks
    // or out of remap entries throws AllocationError.  Atomic: feasibility is
    // checked before any state changes.
    void remap_write(TaskId task, Cycles bytes, int banks_limit);
    ResidencyInfo remap_lookup(TaskId task) const;  // throws MappingError if absent
    bool resident(TaskId task) const;
    int locked_banks_total() const;
    int locked_banks_of(TaskId task) const;
    int free_banks() const;
    int remap_entries_used() const;
    Cycles remap_entry_capacity() const;
    std::vector<TaskId> resident_tasks() const;

    // Completion flush: banks and remap entries freed, no data movement cost.
    void release_banks(TaskId task);

    // ---- execution slot ----
    void set_in_flight(Cycles total, Cycles done);
    void clear_in_flight();
    bool busy() const { return inflight_total_ > 0; }
    // Freezes issue and returns the cycles still needed by the in-flight
    // instruction (0 when idle).  Flush-class operations are exempt from the
    // freeze, which is why release_banks stays legal afterwards.
    Cycles freeze_and_drain();
    void unfreeze();
    bool frozen() const { return frozen_; }

    void set_queue_depth(int queued);
    int queue_depth() const { return queued_; }

    // ---- context switch costing ----
    // Pure query: what saving `current` costs if `next` is dispatched after
    // it.  Eviction triggers when next's outstanding bank need cannot be met
    // even counting current's banks as kept, or always when the bank model is
    // disabled (no remapper: resident data cannot survive a switch).
    // force_evict covers the LO-preempts-LO rule in degraded modes, where the
    // outgoing task's data must leave regardless of space.
    SaveCost save_cost(TaskId current, const Task* next,
                       bool force_evict = false) const;
    // Applies the eviction side effects and returns the context needed later.
    SavedContext commit_save(TaskId current, const SaveCost& sc, int cfg_count,
                             int queued);

    // Extra eviction of a victim's banks when even current's banks are not
    // enough room; returns move-out cost.
    Cycles evict_cost(TaskId victim) const;
    int commit_evict(TaskId victim);  // returns banks evicted

    Cycles restore_cost(const SavedContext& ctx) const;
    // Re-locks the evicted banks (fresh placement via the remapper).
    void commit_restore(TaskId task, const SavedContext& ctx, int banks_limit);

    // Worst case over any reachable state; used for the analysis-side bounds.
    Cycles worst_case_save_cost() const;
    Cycles worst_case_restore_cost() const;

    bool bank_model() const { return bank_model_; }
    const SystemParams& sys() const { return sys_; }
    const CostProfile& profile() const { return profile_; }

private:
    struct Bank {
        TaskId owner = -1;  // -1 = free
        Cycles bytes = 0;
    };

    Cycles save_fixed_cost() const;
    Cycles restore_fixed_cost(const SavedContext& ctx) const;
    int count_new_banks_needed(TaskId task, Cycles bytes) const;

    SystemParams sys_;
    CostProfile profile_;
    bool bank_model_;

    std::array<bool, 4> cfg_slots_{};  // occupancy per config class
    std::vector<Bank> banks_;
    std::map<TaskId, int> entries_of_;  // remap entries per resident task
    int remap_entries_ = 0;
    Cycles inflight_total_ = 0;
    Cycles inflight_done_ = 0;
    bool frozen_ = false;
    int queued_ = 0;
};

}  // namespace mesc
