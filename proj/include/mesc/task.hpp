#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mesc/trace.hpp"
#include "mesc/types.hpp"

// Sporadic dual-criticality task model.  Priorities are fixed (smaller value
// wins) and unique within a set; the analysis and the simulator both key off
// the subset helpers below, so they live here rather than in either consumer.

namespace mesc {

struct Task {
    TaskId id = 0;
    Priority priority = 0;
    Cycles period = 0;     // minimum inter-arrival
    Cycles deadline = 0;   // relative, constrained: deadline <= period
    Cycles c_lo = 0;       // budgeted WCET
    Cycles c_hi = 0;       // overrun WCET (== c_lo for LO tasks)
    CritLevel level = CritLevel::Lo;
    int banks = 0;         // scratchpad banks reserved while resident (eta)
    Cycles footprint_bytes = 0;  // accelerator input data volume
    // Null for CPU-only tasks.  Shared: task copies in priority partitions
    // must stay cheap.
    std::shared_ptr<const InstructionTrace> trace;

    bool uses_accelerator() const { return trace != nullptr; }
    double utilization_lo() const { return double(c_lo) / double(period); }

    // Longest single instruction; 0 for CPU-only tasks.
    Cycles max_instr_cycles() const {
        return trace ? trace->max_instr_cycles() : 0;
    }

    void validate() const;
};

class TaskSet {
public:
    TaskSet() = default;
    explicit TaskSet(std::vector<Task> tasks);

    // Validates the task and rejects duplicate ids or priorities.
    void add(Task t);

    const std::vector<Task>& tasks() const { return tasks_; }
    std::size_t size() const { return tasks_.size(); }
    bool empty() const { return tasks_.empty(); }
    auto begin() const { return tasks_.begin(); }
    auto end() const { return tasks_.end(); }

    bool contains(TaskId id) const { return find(id) != nullptr; }
    const Task* find(TaskId id) const;
    const Task& by_id(TaskId id) const;  // throws std::out_of_range

    double total_utilization_lo() const;
    Cycles max_period() const;  // 0 for an empty set

private:
    std::vector<Task> tasks_;
};

// The four priority/criticality quadrants relative to one task.  The task
// itself belongs to none of them.
struct PriorityPartition {
    TaskSet hp_hi;  // higher priority, HI criticality
    TaskSet hp_lo;
    TaskSet lp_hi;  // lower priority, HI criticality
    TaskSet lp_lo;
};

PriorityPartition partition(const TaskSet& ts, TaskId pivot);

// Subset views by resource usage.
TaskSet accelerator_tasks(const TaskSet& ts);
TaskSet cpu_only_tasks(const TaskSet& ts);

// Longest single instruction over every accelerator task in the set; 0 when
// the set has none.  This is the instruction-granularity blocking bound.
Cycles longest_instruction(const TaskSet& ts);

// Union helper used when assembling blocking sets.
TaskSet set_union(const TaskSet& a, const TaskSet& b);

}  // namespace mesc
