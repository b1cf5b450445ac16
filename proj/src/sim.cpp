#include "mesc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace mesc {

const char* to_string(PreemptionMode m) {
    switch (m) {
        case PreemptionMode::None: return "none";
        case PreemptionMode::Limited: return "limited";
        case PreemptionMode::Instruction: return "instr";
    }
    return "?";
}

const char* to_string(Policy p) { return p == Policy::Mesc ? "mesc" : "amc"; }

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Lo: return "lo";
        case Mode::Transition: return "transition";
        case Mode::Hi: return "hi";
    }
    return "?";
}

PreemptionMode preemption_from_string(const std::string& s) {
    if (s == "none") return PreemptionMode::None;
    if (s == "limited") return PreemptionMode::Limited;
    if (s == "instr") return PreemptionMode::Instruction;
    throw std::invalid_argument("unknown preemption mode: " + s);
}

Policy policy_from_string(const std::string& s) {
    if (s == "mesc") return Policy::Mesc;
    if (s == "amc") return Policy::Amc;
    throw std::invalid_argument("unknown policy: " + s);
}

void SimConfig::validate() const {
    sys.validate();
    if (horizon < 0) throw std::invalid_argument("sim: negative horizon");
    if (overrun_prob < 0.0 || overrun_prob > 1.0)
        throw std::invalid_argument("sim: overrun_prob must be in [0, 1]");
    if (overrun_scale < 1.0)
        throw std::invalid_argument("sim: overrun_scale must be >= 1");
}

Cycles mean_cycles(const std::vector<Cycles>& v) {
    if (v.empty()) return 0;
    __int128 s = 0;
    for (Cycles c : v) s += c;
    return Cycles(s / Cycles(v.size()));
}

Cycles max_cycles(const std::vector<Cycles>& v) {
    Cycles m = 0;
    for (Cycles c : v) m = std::max(m, c);
    return m;
}

namespace {

constexpr Cycles kInf = std::numeric_limits<Cycles>::max() / 4;
constexpr long kMaxLoopIters = 200000000;

struct Job {
    const Task* task = nullptr;
    Cycles release = 0;
    Cycles deadline = 0;  // absolute
    Cycles demand = 0;
    bool overrun = false;
    bool budget_fired = false;
    bool released_in_hi = false;

    Cycles executed = 0;
    std::size_t instr_idx = 0;  // base-trace cursor
    Cycles instr_done = 0;
    Cycles pending_overhead = 0;  // CPU jobs: queued scheduler-check charges

    bool has_ctx = false;
    SavedContext ctx;
    int cfg_seen = 0;

    bool done = false, missed = false, dropped = false;
    bool active() const { return !done && !missed && !dropped; }
    bool complete() const { return executed >= demand; }
    Cycles base_cycles() const { return task->c_lo; }
    Cycles ext_unit() const { return std::max<Cycles>(1, task->max_instr_cycles()); }
};

class Engine {
public:
    Engine(const TaskSet& ts, const SimConfig& cfg)
        : ts_(ts),
          cfg_(cfg),
          accel_(cfg.sys, cfg.profile, cfg.bank_model),
          rng_(cfg.seed) {
        cfg_.validate();
        horizon_ = cfg_.horizon > 0 ? cfg_.horizon : 20 * ts_.max_period();
        if (horizon_ <= 0) horizon_ = 1;
        metrics_.horizon = horizon_;
        for (const auto& t : ts_) {
            tasks_.push_back(&t);
            next_release_.push_back(0);
        }
    }

    SimMetrics run() {
        long iters = 0;
        while (true) {
            MESC_CHECK_MSG(++iters < kMaxLoopIters, "simulation failed to make progress");
            if (now_ >= horizon_) break;
            sweep_finished();
            release_due(now_);
            kill_overdue();
            maybe_revert();

            if (running_ == nullptr) {
                if (jobs_.empty() || !any_active()) {
                    Cycles nr = earliest_release();
                    if (nr >= horizon_) break;
                    now_ = nr;
                    continue;
                }
                // Jobs are waiting; the scheduler notices at the next check.
                if (next_tick_ < now_) next_tick_ = align_tick(now_);
                if (next_tick_ >= horizon_) break;
                now_ = next_tick_;
                release_due(now_);
                kill_overdue();
                next_tick_ += cfg_.sys.t_sr;
                decision();
                update_inversions();
                continue;
            }

            Job* j = running_;
            Cycles po = j->task->uses_accelerator() ? 0 : j->pending_overhead;
            Cycles t_fin = now_ + po + (j->demand - j->executed);
            Cycles t_bud = kInf;
            if (j->task->level == CritLevel::Hi && j->overrun && !j->budget_fired &&
                j->executed < j->task->c_lo)
                t_bud = now_ + po + (j->task->c_lo - j->executed);
            Cycles t_rel = earliest_release();
            if (next_tick_ < now_) next_tick_ = align_tick(now_);
            Cycles t = std::min({t_fin, t_bud, t_rel, next_tick_, j->deadline, horizon_});
            MESC_CHECK(t >= now_);
            advance(*j, t - now_);
            now_ = t;
            if (now_ >= horizon_) break;

            if (t == t_rel) {
                release_due(now_);
                update_inversions();
            }
            if (now_ >= j->deadline && !j->complete()) {
                kill(*j, j->deadline);
                running_ = nullptr;
                update_inversions();
                decision();
            } else if (j->complete()) {
                complete(*j);
                running_ = nullptr;
                update_inversions();
                maybe_revert();
                decision();
            } else if (t == t_bud && j->executed >= j->task->c_lo && !j->budget_fired) {
                j->budget_fired = true;
                if (mode_ == Mode::Lo) enter_transition();
                decision();
            }
            if (t == next_tick_) {
                if (running_ && !running_->task->uses_accelerator())
                    running_->pending_overhead += cfg_.sys.y_cpu_check;
                next_tick_ += cfg_.sys.t_sr;
                decision();
            }
            update_inversions();
        }

        finish();
        return metrics_;
    }

private:
    // ---- releases, deadlines, mode ----

    Cycles align_tick(Cycles t) const {
        return ceil_div(t, cfg_.sys.t_sr) * cfg_.sys.t_sr;
    }

    Cycles earliest_release() const {
        Cycles m = kInf;
        for (std::size_t i = 0; i < tasks_.size(); ++i)
            if (next_release_[i] < horizon_) m = std::min(m, next_release_[i]);
        return m;
    }

    void release_due(Cycles upto) {
        for (std::size_t i = 0; i < tasks_.size(); ++i) {
            const Task* t = tasks_[i];
            while (next_release_[i] <= upto && next_release_[i] < horizon_) {
                make_job(t, next_release_[i]);
                next_release_[i] += t->period;
            }
        }
    }

    void make_job(const Task* t, Cycles rel) {
        bool in_hi = mode_ != Mode::Lo;
        auto& counts = t->level == CritLevel::Hi ? metrics_.hi : metrics_.lo;
        counts.released += 1;
        if (t->level == CritLevel::Lo && in_hi) metrics_.lo_released_in_hi += 1;
        event(rel, "release", t->id, 0);

        // HI jobs always consume one disturbance draw so paired runs with
        // different policies see identical overrun patterns.
        bool over = false;
        Cycles demand = t->c_lo;
        if (t->level == CritLevel::Hi && cfg_.overrun_prob > 0.0) {
            if (coin_(rng_) < cfg_.overrun_prob) {
                Cycles d = std::min<Cycles>(
                    t->c_hi, std::llround(cfg_.overrun_scale * double(t->c_lo)));
                if (d > t->c_lo) {
                    demand = d;
                    over = true;
                }
            }
        }

        // Degraded policy sheds LO work for as long as the mode is raised.
        if (cfg_.policy == Policy::Amc && t->level == CritLevel::Lo && in_hi) {
            counts.dropped += 1;
            event(rel, "drop", t->id, 0);
            return;
        }

        auto j = std::make_unique<Job>();
        j->task = t;
        j->release = rel;
        j->deadline = rel + t->deadline;
        j->released_in_hi = in_hi;
        j->demand = demand;
        j->overrun = over;
        jobs_.push_back(std::move(j));
    }

    void sweep_finished() {
        jobs_.erase(std::remove_if(jobs_.begin(), jobs_.end(),
                                   [](const std::unique_ptr<Job>& j) {
                                       return !j->active();
                                   }),
                    jobs_.end());
    }

    void kill_overdue() {
        for (auto& jp : jobs_) {
            Job& j = *jp;
            if (!j.active() || j.complete()) continue;
            if (now_ >= j.deadline) {
                kill(j, j.deadline);
                if (running_ == &j) {
                    running_ = nullptr;
                    update_inversions();
                }
            }
        }
    }

    void kill(Job& j, Cycles at) {
        j.missed = true;
        auto& counts = j.task->level == CritLevel::Hi ? metrics_.hi : metrics_.lo;
        counts.missed += 1;
        drop_residency(j);
        event(at, "miss", j.task->id, 0);
    }

    void complete(Job& j) {
        j.done = true;
        auto& counts = j.task->level == CritLevel::Hi ? metrics_.hi : metrics_.lo;
        counts.completed += 1;
        if (j.task->level == CritLevel::Lo && j.released_in_hi)
            metrics_.lo_completed_in_hi += 1;
        drop_residency(j);
        event(now_, "complete", j.task->id, now_ - j.release);
    }

    // Flush on exit: banks freed without data movement (flush operations are
    // exempt from the issue freeze).
    void drop_residency(Job& j) {
        if (j.task->uses_accelerator()) {
            accel_.release_banks(j.task->id);
            if (running_ == &j) accel_.clear_in_flight();
            if (mode_ == Mode::Transition) transition_check();
        }
    }

    void enter_transition() {
        mode_ = Mode::Transition;
        metrics_.mode_switches += 1;
        event(now_, "mode_transition", 0, 0);
        if (cfg_.policy == Policy::Amc) {
            for (auto& jp : jobs_) {
                Job& j = *jp;
                if (j.active() && j.task->level == CritLevel::Lo) {
                    MESC_CHECK(&j != running_);  // only a running HI can overrun
                    j.dropped = true;
                    metrics_.lo.dropped += 1;
                    drop_residency(j);
                    event(now_, "drop", j.task->id, 0);
                }
            }
        }
        transition_check();
    }

    void transition_check() {
        if (mode_ != Mode::Transition) return;
        if (resident_lo_tasks() <= 1) {
            mode_ = Mode::Hi;
            event(now_, "mode_hi", 0, 0);
        }
    }

    int resident_lo_tasks() const {
        int n = 0;
        for (TaskId id : accel_.resident_tasks())
            if (ts_.by_id(id).level == CritLevel::Lo) ++n;
        return n;
    }

    void maybe_revert() {
        if (mode_ == Mode::Lo) return;
        if (running_ == nullptr && !any_active()) {
            mode_ = Mode::Lo;
            event(now_, "mode_lo", 0, 0);
        }
    }

    bool any_active() const {
        for (const auto& jp : jobs_)
            if (jp->active()) return true;
        return false;
    }

    // ---- execution ----

    void on_instr_complete(Job& j, const Instruction& in) {
        if (in.kind == InstrKind::Config) {
            accel_.record_config(in.cfg);
            j.cfg_seen = std::min(j.cfg_seen + 1, 4);
        } else if (in.kind == InstrKind::Load) {
            accel_.remap_write(j.task->id, in.bytes, j.task->banks);
        }
    }

    void advance(Job& j, Cycles dt) {
        if (dt == 0) return;
        if (!j.task->uses_accelerator()) {
            Cycles use = std::min(dt, j.pending_overhead);
            j.pending_overhead -= use;
            dt -= use;
            j.executed += dt;
            MESC_CHECK(j.executed <= j.demand);
            return;
        }
        const auto& instrs = j.task->trace->instrs;
        Cycles left = dt;
        while (left > 0) {
            if (j.executed < j.base_cycles()) {
                MESC_CHECK(j.instr_idx < instrs.size());
                const Instruction& in = instrs[j.instr_idx];
                Cycles step = std::min(in.cycles - j.instr_done, left);
                j.instr_done += step;
                j.executed += step;
                left -= step;
                if (j.instr_done == in.cycles) {
                    on_instr_complete(j, in);
                    j.instr_idx += 1;
                    j.instr_done = 0;
                }
            } else {
                // Overrun extension: synthetic compute blocks, no new loads.
                j.executed += left;
                left = 0;
            }
            MESC_CHECK(j.executed <= j.demand);
        }
    }

    Cycles remaining_in_current_instr(const Job& j) const {
        if (!j.task->uses_accelerator() || j.complete()) return 0;
        if (j.executed < j.base_cycles()) {
            if (j.instr_done == 0) return 0;  // at a boundary, nothing in flight
            return j.task->trace->instrs[j.instr_idx].cycles - j.instr_done;
        }
        Cycles into_ext = j.executed - j.base_cycles();
        Cycles within = into_ext % j.ext_unit();
        if (within == 0) return 0;
        return std::min(j.ext_unit() - within, j.demand - j.executed);
    }

    Cycles drain_to_boundary(const Job& j) const {
        if (!j.task->uses_accelerator() || j.complete()) return 0;
        if (j.executed >= j.base_cycles()) return remaining_in_current_instr(j);
        const auto& instrs = j.task->trace->instrs;
        std::size_t i = j.instr_idx;
        Cycles d = 0;
        if (j.instr_done > 0) {
            d = instrs[i].cycles - j.instr_done;
            if (instrs[i].operator_boundary)
                return std::min(d, j.demand - j.executed);
            ++i;
        } else if (i == 0 || i >= instrs.size() || instrs[i - 1].operator_boundary) {
            return 0;  // already stopped at a legal point
        }
        while (i < instrs.size()) {
            d += instrs[i].cycles;
            if (instrs[i].operator_boundary) break;
            ++i;
        }
        return std::min(d, j.demand - j.executed);
    }

    int remaining_instr_count(const Job& j) const {
        if (!j.task->uses_accelerator() || j.complete()) return 0;
        long n = 0;
        if (j.executed < j.base_cycles()) {
            n += long(j.task->trace->instrs.size()) - long(j.instr_idx) -
                 (j.instr_done > 0 ? 1 : 0);
            n += long(ceil_div(std::max<Cycles>(0, j.demand - j.base_cycles()),
                               j.ext_unit()));
        } else {
            n += long(ceil_div(j.demand - j.executed, j.ext_unit()));
        }
        return int(std::clamp<long>(n, 0, cfg_.profile.max_inflight_queue));
    }

    // ---- scheduling ----

    bool job_released_visible(const Job& j) const {
        return j.active() && j.release <= now_ && now_ < j.deadline;
    }

    Job* best_candidate() {
        Job* best_hi = nullptr;
        Job* best_lo = nullptr;
        for (auto& jp : jobs_) {
            Job& j = *jp;
            if (!job_released_visible(j)) continue;
            Job*& slot = j.task->level == CritLevel::Hi ? best_hi : best_lo;
            // FIFO within a task: earlier release wins at equal priority.
            if (!slot || j.task->priority < slot->task->priority ||
                (j.task->priority == slot->task->priority && j.release < slot->release))
                slot = &j;
        }
        switch (mode_) {
            case Mode::Lo: {
                if (!best_hi) return best_lo;
                if (!best_lo) return best_hi;
                return best_lo->task->priority < best_hi->task->priority ? best_lo
                                                                         : best_hi;
            }
            case Mode::Transition: {
                if (best_hi) return best_hi;
                if (cfg_.policy == Policy::Amc) return nullptr;
                // Only LO jobs still draining resident data may run.
                Job* best = nullptr;
                for (auto& jp : jobs_) {
                    Job& j = *jp;
                    if (!job_released_visible(j)) continue;
                    if (j.task->level != CritLevel::Lo) continue;
                    if (!j.task->uses_accelerator() || !accel_.resident(j.task->id))
                        continue;
                    if (!best || j.task->priority < best->task->priority) best = &j;
                }
                return best;
            }
            case Mode::Hi: {
                if (best_hi) return best_hi;
                return cfg_.policy == Policy::Mesc ? best_lo : nullptr;
            }
        }
        return nullptr;
    }

    void decision() {
        Job* best = best_candidate();
        if (best == running_) return;
        if (running_ != nullptr) {
            // A busy accelerator cannot be taken mid-job without preemption
            // support; the engine stays put and inversion accrues.
            if (cfg_.preemption == PreemptionMode::None &&
                running_->task->uses_accelerator())
                return;
        }
        if (best == nullptr && running_ == nullptr) return;
        perform_switch(best);
    }

    // Evict other tasks' banks (never `keep`'s or `next`'s) until next's
    // outstanding reservation fits.  LO data goes first, then lowest
    // priority.  Returns the move-out cost.
    Cycles ensure_fit(const Task* next, const Job* keep) {
        if (!cfg_.bank_model || next == nullptr || !next->uses_accelerator()) return 0;
        int need = next->banks - accel_.locked_banks_of(next->id);
        if (need <= 0) return 0;
        Cycles cost = 0;
        while (accel_.free_banks() < need) {
            std::vector<TaskId> residents = accel_.resident_tasks();
            TaskId victim = -1;
            bool victim_lo = false;
            Priority victim_prio = 0;
            for (TaskId id : residents) {
                if (id == next->id) continue;
                if (keep && id == keep->task->id) continue;
                const Task& t = ts_.by_id(id);
                bool lo = t.level == CritLevel::Lo;
                // Prefer LO victims; within a level, lowest priority first.
                bool better = victim == -1 || (lo && !victim_lo) ||
                              (lo == victim_lo && t.priority > victim_prio);
                if (better) {
                    victim = id;
                    victim_lo = lo;
                    victim_prio = t.priority;
                }
            }
            MESC_CHECK_MSG(victim != -1, "bank demand unsatisfiable after evicting all");
            cost += evict_and_debit(victim);
        }
        if (mode_ == Mode::Transition) transition_check();
        return cost;
    }

    // Move a suspended task's data out and debit the re-fetch onto its job.
    Cycles evict_and_debit(TaskId victim) {
        Cycles cost = accel_.evict_cost(victim);
        int n = accel_.commit_evict(victim);
        Job* vj = active_job_of(victim);
        MESC_CHECK_MSG(vj != nullptr, "resident data without an active job");
        vj->has_ctx = true;
        vj->ctx.banks_to_reload += n;
        vj->ctx.bytes_to_reload += Cycles(n) * cfg_.sys.bank_size;
        event(now_, "evict", victim, n);
        return cost;
    }

    // HI mode admits at most one LO task's residency.  A LO job taking the
    // engine there evacuates any other LO task's remaining data first, the
    // same wholesale rule as LO-preempts-LO; without it a fresh LO job's
    // loads would put a second LO task's data alongside the retained one.
    Cycles evacuate_other_lo(const Task* next) {
        if (!cfg_.bank_model || mode_ != Mode::Hi || next->level != CritLevel::Lo)
            return 0;
        Cycles cost = 0;
        for (TaskId id : accel_.resident_tasks()) {
            if (id == next->id) continue;
            if (ts_.by_id(id).level != CritLevel::Lo) continue;
            cost += evict_and_debit(id);
        }
        return cost;
    }

    Job* active_job_of(TaskId id) {
        for (auto& jp : jobs_)
            if (jp->active() && jp->task->id == id) return jp.get();
        return nullptr;
    }

    void perform_switch(Job* next) {
        Job* j = running_;
        if (j != nullptr) {
            if (j->task->uses_accelerator()) {
                Cycles drain = cfg_.preemption == PreemptionMode::Limited
                                   ? drain_to_boundary(*j)
                                   : remaining_in_current_instr(*j);
                accel_.set_in_flight(drain, 0);
                Cycles reported = accel_.freeze_and_drain();
                MESC_CHECK(reported == drain);
                metrics_.max_observed_drain =
                    std::max(metrics_.max_observed_drain, drain);
                if (drain > 0) {
                    advance(*j, drain);
                    now_ += drain;
                    // Budget exhaustion inside the drained window still trips
                    // the mode switch.
                    if (j->task->level == CritLevel::Hi && j->overrun &&
                        !j->budget_fired && j->executed >= j->task->c_lo) {
                        j->budget_fired = true;
                        if (mode_ == Mode::Lo) enter_transition();
                    }
                }
                if (j->complete()) {
                    complete(*j);
                    running_ = nullptr;
                    j = nullptr;
                } else {
                    // LO preempting LO in a raised mode evacuates wholesale,
                    // and so does any preemption of a transition drainer: its
                    // data must reach main memory for the transition to
                    // progress, so a retained-in-bank save would stall the
                    // mode switch behind the drainer's full execution.
                    bool force = (mode_ != Mode::Lo && next != nullptr &&
                                  j->task->level == CritLevel::Lo &&
                                  next->task->level == CritLevel::Lo) ||
                                 (mode_ == Mode::Transition &&
                                  j->task->level == CritLevel::Lo);
                    SaveCost sc = accel_.save_cost(j->task->id,
                                                   next ? next->task : nullptr, force);
                    int queued = remaining_instr_count(*j);
                    SavedContext ctx =
                        accel_.commit_save(j->task->id, sc, j->cfg_seen, queued);
                    // Room for next beyond what current's eviction freed; the
                    // extra move-outs are part of the same save burst, and the
                    // 8-bank ceiling keeps the burst within the save bound.
                    Cycles extra = next ? ensure_fit(next->task, j) : 0;
                    Cycles total = sc.cycles + extra;
                    now_ += total;
                    metrics_.save_cycles.push_back(total);
                    metrics_.engine_saves += 1;
                    MESC_CHECK_MSG(total <= cfg_.sys.y_acc_save,
                                   "context save exceeded its analysis bound");
                    j->has_ctx = true;
                    j->ctx.banks_to_reload += ctx.banks_to_reload;
                    j->ctx.bytes_to_reload += ctx.bytes_to_reload;
                    j->ctx.cfg_count = ctx.cfg_count;
                    j->ctx.queued = ctx.queued;
                    event(now_, "save", j->task->id, total);
                    if (mode_ == Mode::Transition) transition_check();
                }
            } else {
                now_ += cfg_.sys.y_cpu_switch;
                event(now_, "preempt", j->task->id, cfg_.sys.y_cpu_switch);
            }
        }
        running_ = nullptr;
        update_inversions();  // engine released: waiters acquire here

        if (next != nullptr && next->active()) {
            if (next->task->uses_accelerator()) {
                // Dispatch from idle may still have to make room; those
                // move-outs are their own save burst (of the victims).
                Cycles extra =
                    evacuate_other_lo(next->task) + ensure_fit(next->task, nullptr);
                if (extra > 0) {
                    now_ += extra;
                    metrics_.save_cycles.push_back(extra);
                    metrics_.engine_saves += 1;
                    MESC_CHECK(extra <= cfg_.sys.y_acc_save);
                }
                if (next->has_ctx) {
                    Cycles rc = accel_.restore_cost(next->ctx);
                    now_ += rc;
                    metrics_.restore_cycles.push_back(rc);
                    MESC_CHECK_MSG(rc <= cfg_.sys.y_acc_restore,
                                   "context restore exceeded its analysis bound");
                    accel_.commit_restore(next->task->id, next->ctx, next->task->banks);
                    next->has_ctx = false;
                    next->ctx = SavedContext{};
                    event(now_, "restore", next->task->id, rc);
                }
                // Fresh job: only the preemption timer is armed, free of charge.
            } else {
                if (next->executed > 0) now_ += cfg_.sys.y_cpu_switch;
            }
            running_ = next;
            event(now_, "dispatch", next->task->id, 0);
            update_inversions();
        }
        check_invariants();
    }

    // ---- inversion accounting ----

    struct Episode {
        bool open = false;
        Cycles start = 0;
        const Job* holder = nullptr;
    };

    void update_inversions() {
        Job* holder = running_;
        bool ci_active = false, pi_active = false;
        if (holder != nullptr) {
            bool holder_lo = holder->task->level == CritLevel::Lo;
            for (const auto& jp : jobs_) {
                const Job& w = *jp;
                if (&w == holder || !job_released_visible(w)) continue;
                bool w_hi = w.task->level == CritLevel::Hi;
                if (mode_ != Mode::Lo && holder_lo && w_hi)
                    ci_active = true;
                else if (w.task->priority < holder->task->priority &&
                         mode_eligible(w))
                    pi_active = true;
            }
        }
        roll(pi_ep_, pi_active, holder, metrics_.pi_inversions);
        roll(ci_ep_, ci_active, holder, metrics_.ci_inversions);
    }

    // Whether the scheduler could hand this waiter the engine right now if it
    // were free.  A wait imposed by the mode rules themselves (LO parked
    // behind HI preference, or not drain-eligible during the transition) is a
    // criticality effect, not engine-occupancy inversion, and no preemption
    // granularity could shorten it.
    bool mode_eligible(const Job& w) const {
        if (mode_ == Mode::Lo) return true;
        if (w.task->level == CritLevel::Hi) return true;
        if (cfg_.policy == Policy::Amc) return false;
        for (const auto& jp : jobs_)
            if (jp->task->level == CritLevel::Hi && job_released_visible(*jp))
                return false;
        if (mode_ == Mode::Transition)
            return w.task->uses_accelerator() && accel_.resident(w.task->id);
        return true;
    }

    void roll(Episode& ep, bool active, const Job* holder, std::vector<Cycles>& out) {
        if (ep.open && (!active || ep.holder != holder)) {
            Cycles d = now_ - ep.start;
            if (d > 0) out.push_back(d);
            ep.open = false;
        }
        if (active && !ep.open) {
            ep.open = true;
            ep.start = now_;
            ep.holder = holder;
        }
    }

    // ---- invariants, bookkeeping ----

    void check_invariants() {
        if (mode_ == Mode::Hi)
            MESC_CHECK_MSG(resident_lo_tasks() <= 1,
                           "HI mode with more than one LO task resident");
        if (cfg_.policy == Policy::Amc && mode_ != Mode::Lo)
            for (const auto& jp : jobs_)
                MESC_CHECK(!(jp->active() && jp->task->level == CritLevel::Lo));
        MESC_CHECK(accel_.locked_banks_total() <= cfg_.sys.total_banks);
    }

    void event(Cycles t, const char* kind, TaskId task, Cycles value) {
        if (!cfg_.record_events) return;
        metrics_.events.push_back(TraceEvent{t, kind, task, value});
    }

    void finish() {
        for (auto& jp : jobs_) {
            Job& j = *jp;
            if (!j.active()) continue;
            if (j.deadline <= horizon_) {
                kill(j, j.deadline);
            } else {
                auto& counts = j.task->level == CritLevel::Hi ? metrics_.hi : metrics_.lo;
                counts.in_flight += 1;
            }
        }
        // Conservation: every released job is accounted for exactly once.
        auto accounted = [](const LevelCounts& c) {
            return c.completed + c.missed + c.dropped + c.in_flight;
        };
        MESC_CHECK(accounted(metrics_.lo) == metrics_.lo.released);
        MESC_CHECK(accounted(metrics_.hi) == metrics_.hi.released);
    }

    const TaskSet& ts_;
    SimConfig cfg_;
    AcceleratorState accel_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> coin_{0.0, 1.0};

    Cycles horizon_ = 0;
    Cycles now_ = 0;
    Cycles next_tick_ = 0;
    Mode mode_ = Mode::Lo;
    std::vector<const Task*> tasks_;
    std::vector<Cycles> next_release_;
    std::vector<std::unique_ptr<Job>> jobs_;
    Job* running_ = nullptr;
    Episode pi_ep_, ci_ep_;
    SimMetrics metrics_;
};

}  // namespace

SimMetrics simulate(const TaskSet& ts, const SimConfig& cfg) {
    cfg.validate();
    if (ts.empty()) {
        SimMetrics m;
        m.horizon = cfg.horizon > 0 ? cfg.horizon : 1;
        return m;
    }
    Engine eng(ts, cfg);
    return eng.run();
}

}  // namespace mesc
