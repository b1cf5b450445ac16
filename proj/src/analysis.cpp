#include "mesc/analysis.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace mesc {

namespace {

constexpr long kMaxIterations = 1000000;

// Ascending Kleene iteration from the recurrence's constant part.  `rhs`
// must be monotone in r; any iterate above the deadline means the task
// cannot be guaranteed and we stop immediately.
std::optional<Cycles> fixed_point(Cycles start, Cycles deadline,
                                  const std::function<Cycles(Cycles)>& rhs) {
    Cycles r = start;
    if (r > deadline) return std::nullopt;
    for (long i = 0; i < kMaxIterations; ++i) {
        Cycles next = rhs(r);
        MESC_CHECK_MSG(next >= r, "response-time recurrence not ascending");
        if (next > deadline) return std::nullopt;
        if (next == r) return r;
        r = next;
    }
    return std::nullopt;  // safety net; unreachable for integer ascending chains
}

// Interference sums can overflow transiently on hostile inputs; accumulate
// wide and clamp to deadline+1, which the iteration treats as "too late"
// anyway.
Cycles clamp_to(Cycles deadline, __int128 v) {
    __int128 lim = __int128(deadline) + 1;
    return v > lim ? Cycles(lim) : Cycles(v);
}

}  // namespace

Cycles pi_blocking_lo(const TaskSet& ts, TaskId pivot, const SystemParams& sys) {
    PriorityPartition p = partition(ts, pivot);
    TaskSet lp = set_union(p.lp_hi, p.lp_lo);
    return longest_instruction(accelerator_tasks(lp)) + sys.t_sr;
}

Cycles total_blocking_lo(const TaskSet& ts, TaskId pivot, const SystemParams& sys) {
    // In LO mode priority inversion is the only blocking source.
    return pi_blocking_lo(ts, pivot, sys);
}

Cycles pi_blocking_hi(const TaskSet& ts, TaskId pivot, const SystemParams& sys) {
    PriorityPartition p = partition(ts, pivot);
    return longest_instruction(accelerator_tasks(p.lp_hi)) + sys.t_sr;
}

Cycles ci_blocking_hi(const TaskSet& ts, TaskId pivot, const SystemParams& sys) {
    PriorityPartition p = partition(ts, pivot);
    TaskSet lo = set_union(p.lp_lo, p.hp_lo);
    return longest_instruction(accelerator_tasks(lo)) + sys.t_sr;
}

Cycles total_blocking_hi(const TaskSet& ts, TaskId pivot, const SystemParams& sys) {
    PriorityPartition p = partition(ts, pivot);
    TaskSet blockers = set_union(set_union(p.lp_lo, p.hp_lo), p.lp_hi);
    Cycles b = longest_instruction(accelerator_tasks(blockers)) + sys.t_sr;
    // Identity with the split bounds; max because one drain blocks, not two.
    MESC_CHECK(b == std::max(pi_blocking_hi(ts, pivot, sys),
                             ci_blocking_hi(ts, pivot, sys)));
    return b;
}

std::optional<Cycles> response_time_lo(const TaskSet& ts, TaskId pivot,
                                       const SystemParams& sys) {
    sys.validate();
    const Task& ti = ts.by_id(pivot);
    PriorityPartition p = partition(ts, pivot);
    TaskSet hp = set_union(p.hp_hi, p.hp_lo);
    TaskSet hp_cpu = cpu_only_tasks(hp);
    TaskSet hp_acc = accelerator_tasks(hp);

    Cycles base = total_blocking_lo(ts, pivot, sys) + ti.c_lo + sys.y_acc_save +
                  sys.y_acc_restore;
    auto rhs = [&](Cycles r) {
        __int128 v = base;
        v += __int128(ceil_div(r, sys.t_sr)) * sys.y_cpu_check;
        for (const auto& tj : hp_cpu)
            v += __int128(ceil_div(r, tj.period)) * (2 * sys.y_cpu_switch + tj.c_lo);
        for (const auto& tk : hp_acc)
            v += __int128(ceil_div(r, tk.period)) *
                 (sys.y_acc_save + sys.y_acc_restore + tk.c_lo);
        return clamp_to(ti.deadline, v);
    };
    return fixed_point(base, ti.deadline, rhs);
}

std::optional<Cycles> response_time_hi(const TaskSet& ts, TaskId pivot,
                                       const SystemParams& sys) {
    sys.validate();
    const Task& ti = ts.by_id(pivot);
    if (ti.level != CritLevel::Hi)
        throw std::invalid_argument("response_time_hi: pivot must be HI");
    PriorityPartition p = partition(ts, pivot);
    TaskSet hp_cpu = cpu_only_tasks(p.hp_hi);
    TaskSet hp_acc = accelerator_tasks(p.hp_hi);

    Cycles base = total_blocking_hi(ts, pivot, sys) + ti.c_hi + sys.y_acc_save +
                  sys.y_acc_restore;
    auto rhs = [&](Cycles r) {
        __int128 v = base;
        v += __int128(ceil_div(r, sys.t_sr)) * sys.y_cpu_check;
        for (const auto& tj : hp_cpu)
            v += __int128(ceil_div(r, tj.period)) * (2 * sys.y_cpu_switch + tj.c_hi);
        for (const auto& tk : hp_acc)
            v += __int128(ceil_div(r, tk.period)) *
                 (sys.y_acc_save + sys.y_acc_restore + tk.c_hi);
        return clamp_to(ti.deadline, v);
    };
    return fixed_point(base, ti.deadline, rhs);
}

std::optional<Cycles> response_time_star(const TaskSet& ts, TaskId pivot,
                                         const SystemParams& sys,
                                         Cycles r_lo_pivot) {
    sys.validate();
    const Task& ti = ts.by_id(pivot);
    if (ti.level != CritLevel::Hi)
        throw std::invalid_argument("response_time_star: pivot must be HI");
    if (r_lo_pivot <= 0)
        throw std::invalid_argument("response_time_star: r_lo_pivot must be positive");
    PriorityPartition p = partition(ts, pivot);
    TaskSet hp_lo_cpu = cpu_only_tasks(p.hp_lo);
    TaskSet hp_lo_acc = accelerator_tasks(p.hp_lo);
    TaskSet hp_hi_cpu = cpu_only_tasks(p.hp_hi);
    TaskSet hp_hi_acc = accelerator_tasks(p.hp_hi);

    // Carried-over LO interference is bounded by the arrivals within one
    // LO-mode response window of the pivot; it does not grow as the HI-side
    // window stretches, so it sits in the constant part.
    __int128 base128 = total_blocking_hi(ts, pivot, sys) + ti.c_hi +
                       sys.y_acc_save + sys.y_acc_restore;
    for (const auto& tj : hp_lo_cpu)
        base128 += __int128(ceil_div(r_lo_pivot, tj.period)) *
                   (2 * sys.y_cpu_switch + tj.c_lo);
    for (const auto& tm : hp_lo_acc)
        base128 += __int128(ceil_div(r_lo_pivot, tm.period)) *
                   (sys.y_acc_save + sys.y_acc_restore + tm.c_lo);
    Cycles base = clamp_to(ti.deadline, base128);

    auto rhs = [&](Cycles r) {
        __int128 v = base128;
        v += __int128(ceil_div(r, sys.t_sr)) * sys.y_cpu_check;
        for (const auto& tk : hp_hi_cpu)
            v += __int128(ceil_div(r, tk.period)) * (2 * sys.y_cpu_switch + tk.c_hi);
        for (const auto& tn : hp_hi_acc)
            v += __int128(ceil_div(r, tn.period)) *
                 (sys.y_acc_save + sys.y_acc_restore + tn.c_hi);
        return clamp_to(ti.deadline, v);
    };
    return fixed_point(base, ti.deadline, rhs);
}

bool TaskAnalysis::schedulable() const {
    if (!r_lo) return false;
    if (level == CritLevel::Hi && (!r_hi || !r_star)) return false;
    return true;
}

const TaskAnalysis& AnalysisResult::row_for(TaskId id) const {
    for (const auto& r : rows)
        if (r.id == id) return r;
    throw std::out_of_range("analysis result: unknown task id");
}

AnalysisResult analyze(const TaskSet& ts, const SystemParams& sys) {
    AnalysisResult out;
    for (const auto& t : ts) {
        TaskAnalysis row;
        row.id = t.id;
        row.level = t.level;
        row.pb_lo = pi_blocking_lo(ts, t.id, sys);
        row.b_lo = total_blocking_lo(ts, t.id, sys);
        row.r_lo = response_time_lo(ts, t.id, sys);
        if (t.level == CritLevel::Hi) {
            row.pb_hi = pi_blocking_hi(ts, t.id, sys);
            row.cb_hi = ci_blocking_hi(ts, t.id, sys);
            row.b_hi = total_blocking_hi(ts, t.id, sys);
            row.r_hi = response_time_hi(ts, t.id, sys);
            if (row.r_lo)
                row.r_star = response_time_star(ts, t.id, sys, *row.r_lo);
        }
        out.rows.push_back(row);
    }
    std::sort(out.rows.begin(), out.rows.end(),
              [](const TaskAnalysis& a, const TaskAnalysis& b) { return a.id < b.id; });
    out.schedulable = std::all_of(out.rows.begin(), out.rows.end(),
                                  [](const TaskAnalysis& r) { return r.schedulable(); });
    return out;
}

}  // namespace mesc
