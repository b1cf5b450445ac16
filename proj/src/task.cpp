#include "mesc/task.hpp"

#include <algorithm>
#include <stdexcept>

namespace mesc {

void Task::validate() const {
    if (period <= 0) throw std::invalid_argument("task: period must be positive");
    if (deadline <= 0 || deadline > period)
        throw std::invalid_argument("task: deadline must be in (0, period]");
    if (c_lo <= 0) throw std::invalid_argument("task: c_lo must be positive");
    if (c_hi < c_lo) throw std::invalid_argument("task: c_hi must be >= c_lo");
    if (level == CritLevel::Lo && c_hi != c_lo)
        throw std::invalid_argument("task: LO task must have c_hi == c_lo");
    if (banks < 0) throw std::invalid_argument("task: negative bank reservation");
    if (uses_accelerator()) {
        if (banks < 1) throw std::invalid_argument("task: accelerator task needs >= 1 bank");
        if (trace->total_cycles() != c_lo)
            throw std::invalid_argument("task: trace duration must equal c_lo");
    } else {
        if (banks != 0) throw std::invalid_argument("task: CPU-only task cannot hold banks");
    }
}

TaskSet::TaskSet(std::vector<Task> tasks) {
    for (auto& t : tasks) add(std::move(t));
}

void TaskSet::add(Task t) {
    t.validate();
    for (const auto& other : tasks_) {
        if (other.id == t.id)
            throw std::invalid_argument("task set: duplicate task id");
        if (other.priority == t.priority)
            throw std::invalid_argument("task set: duplicate priority");
    }
    tasks_.push_back(std::move(t));
}

const Task* TaskSet::find(TaskId id) const {
    for (const auto& t : tasks_)
        if (t.id == id) return &t;
    return nullptr;
}

const Task& TaskSet::by_id(TaskId id) const {
    const Task* t = find(id);
    if (!t) throw std::out_of_range("task set: unknown task id");
    return *t;
}

double TaskSet::total_utilization_lo() const {
    double u = 0.0;
    for (const auto& t : tasks_) u += t.utilization_lo();
    return u;
}

Cycles TaskSet::max_period() const {
    Cycles m = 0;
    for (const auto& t : tasks_) m = std::max(m, t.period);
    return m;
}

PriorityPartition partition(const TaskSet& ts, TaskId pivot) {
    const Task& p = ts.by_id(pivot);
    PriorityPartition out;
    for (const auto& t : ts) {
        if (t.id == pivot) continue;
        bool higher = t.priority < p.priority;
        bool hi = t.level == CritLevel::Hi;
        if (higher)
            (hi ? out.hp_hi : out.hp_lo).add(t);
        else
            (hi ? out.lp_hi : out.lp_lo).add(t);
    }
    return out;
}

TaskSet accelerator_tasks(const TaskSet& ts) {
    TaskSet out;
    for (const auto& t : ts)
        if (t.uses_accelerator()) out.add(t);
    return out;
}

TaskSet cpu_only_tasks(const TaskSet& ts) {
    TaskSet out;
    for (const auto& t : ts)
        if (!t.uses_accelerator()) out.add(t);
    return out;
}

Cycles longest_instruction(const TaskSet& ts) {
    Cycles m = 0;
    for (const auto& t : ts) m = std::max(m, t.max_instr_cycles());
    return m;
}

TaskSet set_union(const TaskSet& a, const TaskSet& b) {
    TaskSet out = a;
    for (const auto& t : b)
        if (!out.contains(t.id)) out.add(t);
    return out;
}

}  // namespace mesc
