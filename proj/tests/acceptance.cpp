// Release gate for the analyzer + simulator.  Ten end-to-end checks, each
// printing exactly one [PASS]/[FAIL] line; the process exits non-zero when any
// check fails.  Thresholds are pinned constants: loosening them to turn a red
// run green defeats the point of the gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mesc/analysis.hpp"
#include "mesc/experiment.hpp"
#include "mesc/io.hpp"
#include "mesc/sim.hpp"
#include "mesc/task.hpp"
#include "mesc/taskset_gen.hpp"
#include "mesc/trace.hpp"
#include "mesc/types.hpp"

using namespace mesc;

namespace {

// ---------------------------------------------------------------------------
// pinned gates
// ---------------------------------------------------------------------------

constexpr int kIdentitySets = 1000;       // C1
constexpr double kIdentityMaxSeconds = 10.0;

constexpr Cycles kRefLowPrioResponse = 39800;   // C2 reference pair, low task
constexpr Cycles kRefHighPrioResponse = 20500;  // C2 reference pair, high task
constexpr int kResidualSets = 200;

constexpr int kSoundnessSets = 200;       // C3
constexpr double kSoundnessMaxSeconds = 300.0;

constexpr double kMinPiSpeedup = 100.0;   // C4
constexpr double kMinCiSpeedup = 100.0;
constexpr double kSpeedupMaxSeconds = 120.0;

constexpr double kBankDeltaLow = 4000.0;  // C5, cycles
constexpr double kBankDeltaHigh = 6000.0;
constexpr double kBankRatioLow = 0.10;
constexpr double kBankRatioHigh = 0.40;

constexpr double kCurveSetsPerPoint = 100;  // C7
constexpr double kCurveWithoutBase = 0.05;  // success ceiling, no-preemption @ 0.85
constexpr double kCurveWithBase = 0.50;     // success floor, instruction-level @ 0.85
constexpr double kCurveDominanceTol = 0.10;

constexpr double kTrendTol = 0.05;          // C8 per-step noise allowance
constexpr double kBetaSurvSpread = 0.15;

constexpr int kStressSets = 60;             // C9
constexpr int kUunifastDraws = 10000;       // C10
constexpr double kUunifastSumTol = 1e-9;

// 95% binomial half-width for a proportion p estimated from n runs.
double binom_halfwidth(double p, int n) {
    return 1.96 * std::sqrt(p * (1.0 - p) / double(n));
}

// ---------------------------------------------------------------------------
// small harness
// ---------------------------------------------------------------------------

struct Criterion {
    bool ok = true;
    std::string note;                    // stats shown on the PASS line
    std::vector<std::string> problems;   // shown on the FAIL line

    void expect(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            if (problems.size() < 8) problems.push_back(msg);
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int idx, const std::string& title, const Criterion& c, double secs) {
    std::string body = c.note;
    if (!c.ok) {
        body.clear();
        for (std::size_t i = 0; i < c.problems.size(); ++i) {
            if (i) body += "; ";
            body += c.problems[i];
        }
        if (body.empty()) body = "failed";
        if (!c.note.empty()) body += " | " + c.note;
    }
    std::printf("[%s] C%d: %s - %s (%.1fs)\n", c.ok ? "PASS" : "FAIL", idx,
                title.c_str(), body.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return std::string(buf);
}

// Pooled per-episode statistics across many runs.
struct Pool {
    long double sum = 0.0L;
    long long n = 0;

    void add(const std::vector<Cycles>& v) {
        for (Cycles c : v) sum += (long double)c;
        n += (long long)v.size();
    }
    double mean() const { return n > 0 ? double(sum / (long double)n) : 0.0; }
};

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

std::shared_ptr<const InstructionTrace> fixed_trace(const std::vector<Cycles>& cycles) {
    InstructionTrace tr;
    for (Cycles c : cycles) {
        Instruction in;
        in.kind = InstrKind::Compute;
        in.cycles = c;
        tr.instrs.push_back(in);
    }
    if (!tr.instrs.empty()) tr.instrs.back().operator_boundary = true;
    return std::make_shared<const InstructionTrace>(std::move(tr));
}

Task acc_task(TaskId id, Priority prio, Cycles period, Cycles c_lo, Cycles c_hi,
              CritLevel lvl, const std::vector<Cycles>& instrs, int banks) {
    Task t;
    t.id = id;
    t.priority = prio;
    t.period = period;
    t.deadline = period;
    t.c_lo = c_lo;
    t.c_hi = c_hi;
    t.level = lvl;
    t.banks = banks;
    t.footprint_bytes = Cycles(banks) * 16 * 1024;
    t.trace = fixed_trace(instrs);
    return t;
}

// Two-task reference system whose response times were fixed by independent
// hand iteration of the recurrences: the low-priority task converges through
// 27000 -> 39600 -> 39800, the high-priority one through 20000 -> 20400 ->
// 20500.
SystemParams reference_sys() {
    SystemParams sys;
    sys.t_sr = 5000;
    sys.y_cpu_check = 100;
    sys.y_cpu_switch = 400;
    sys.y_acc_save = 1000;
    sys.y_acc_restore = 1000;
    return sys;
}

TaskSet reference_pair() {
    TaskSet ts;
    ts.add(acc_task(1, 1, 100000, 10000, 20000, CritLevel::Hi,
                    {2500, 2500, 2500, 2500}, 1));
    ts.add(acc_task(2, 2, 100000, 20000, 20000, CritLevel::Lo,
                    {3000, 3000, 3000, 3000, 3000, 3000, 2000}, 1));
    return ts;
}

// Deterministic spread of generator parameters; index-driven so every
// criterion re-runs identically.
GenParams spread_params(int s) {
    GenParams gp;
    gp.n_tasks = 3 + s % 8;                                 // 3..10
    gp.total_util = 0.30 + 0.05 * double(s % 9);            // 0.30..0.70
    gp.crit_proportion = 0.15 + 0.07 * double(s % 11);      // 0.15..0.85
    gp.acc_proportion = (s % 4 == 0) ? 0.7 : 1.0;
    gp.c_lo_min = 50000;
    gp.c_lo_max = 2000000;
    return gp;
}

// ---------------------------------------------------------------------------
// independent recurrence right-hand sides (for the residual checks)
// ---------------------------------------------------------------------------

Cycles rhs_lo(const TaskSet& ts, const Task& ti, const SystemParams& sys, Cycles r) {
    PriorityPartition p = partition(ts, ti.id);
    TaskSet hp = set_union(p.hp_hi, p.hp_lo);
    Cycles v = total_blocking_lo(ts, ti.id, sys) + ti.c_lo + sys.y_acc_save +
               sys.y_acc_restore;
    v += ceil_div(r, sys.t_sr) * sys.y_cpu_check;
    for (const auto& tj : cpu_only_tasks(hp))
        v += ceil_div(r, tj.period) * (2 * sys.y_cpu_switch + tj.c_lo);
    for (const auto& tk : accelerator_tasks(hp))
        v += ceil_div(r, tk.period) * (sys.y_acc_save + sys.y_acc_restore + tk.c_lo);
    return v;
}

Cycles rhs_hi(const TaskSet& ts, const Task& ti, const SystemParams& sys, Cycles r) {
    PriorityPartition p = partition(ts, ti.id);
    Cycles v = total_blocking_hi(ts, ti.id, sys) + ti.c_hi + sys.y_acc_save +
               sys.y_acc_restore;
    v += ceil_div(r, sys.t_sr) * sys.y_cpu_check;
    for (const auto& tj : cpu_only_tasks(p.hp_hi))
        v += ceil_div(r, tj.period) * (2 * sys.y_cpu_switch + tj.c_hi);
    for (const auto& tk : accelerator_tasks(p.hp_hi))
        v += ceil_div(r, tk.period) * (sys.y_acc_save + sys.y_acc_restore + tk.c_hi);
    return v;
}

Cycles rhs_star(const TaskSet& ts, const Task& ti, const SystemParams& sys,
                Cycles r_lo_pivot, Cycles r) {
    PriorityPartition p = partition(ts, ti.id);
    Cycles v = total_blocking_hi(ts, ti.id, sys) + ti.c_hi + sys.y_acc_save +
               sys.y_acc_restore;
    // Carried-over interference windows are frozen at the LO response time.
    for (const auto& tj : cpu_only_tasks(p.hp_lo))
        v += ceil_div(r_lo_pivot, tj.period) * (2 * sys.y_cpu_switch + tj.c_lo);
    for (const auto& tm : accelerator_tasks(p.hp_lo))
        v += ceil_div(r_lo_pivot, tm.period) *
             (sys.y_acc_save + sys.y_acc_restore + tm.c_lo);
    v += ceil_div(r, sys.t_sr) * sys.y_cpu_check;
    for (const auto& tk : cpu_only_tasks(p.hp_hi))
        v += ceil_div(r, tk.period) * (2 * sys.y_cpu_switch + tk.c_hi);
    for (const auto& tn : accelerator_tasks(p.hp_hi))
        v += ceil_div(r, tn.period) * (sys.y_acc_save + sys.y_acc_restore + tn.c_hi);
    return v;
}

// ---------------------------------------------------------------------------
// C1: blocking-term identities
// ---------------------------------------------------------------------------

Criterion check_identities(double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    SystemParams sys;
    CostProfile prof;
    long checks = 0;
    for (int s = 0; s < kIdentitySets && c.ok; ++s) {
        TaskSet ts = generate(spread_params(s), sys, prof,
                              derive_seed(0xACCE9701, std::uint64_t(s), 0, 0));
        AnalysisResult res = analyze(ts, sys);
        for (const Task& t : ts) {
            Cycles pb = pi_blocking_lo(ts, t.id, sys);
            Cycles b = total_blocking_lo(ts, t.id, sys);
            c.expect(b == pb, fmt("set %d task %d: b_lo %lld != pb_lo %lld", s,
                                  t.id, (long long)b, (long long)pb));
            const TaskAnalysis& row = res.row_for(t.id);
            c.expect(row.pb_lo == pb && row.b_lo == b,
                     fmt("set %d task %d: report rows disagree with direct terms",
                         s, t.id));
            ++checks;
            if (t.level == CritLevel::Hi) {
                Cycles pbh = pi_blocking_hi(ts, t.id, sys);
                Cycles cbh = ci_blocking_hi(ts, t.id, sys);
                Cycles bh = total_blocking_hi(ts, t.id, sys);
                c.expect(bh == std::max(pbh, cbh),
                         fmt("set %d task %d: b_hi %lld != max(pb_hi %lld, cb_hi %lld)",
                             s, t.id, (long long)bh, (long long)pbh, (long long)cbh));
                c.expect(row.pb_hi == pbh && row.cb_hi == cbh && row.b_hi == bh,
                         fmt("set %d task %d: report HI terms disagree", s, t.id));
                ++checks;
            }
        }
    }
    secs = seconds_since(t0);
    c.expect(secs < kIdentityMaxSeconds,
             fmt("runtime %.1fs exceeds %.0fs budget", secs, kIdentityMaxSeconds));
    c.note = fmt("%d sets, %ld identity checks; transition terms reuse the HI terms "
                 "by construction", kIdentitySets, checks);
    return c;
}

// ---------------------------------------------------------------------------
// C2: fixed-point residuals + reference response times
// ---------------------------------------------------------------------------

Criterion check_fixed_points(double& secs) {
    auto t0 = Clock::now();
    Criterion c;

    SystemParams rsys = reference_sys();
    TaskSet rp = reference_pair();
    auto r_low = response_time_lo(rp, 2, rsys);
    auto r_high = response_time_lo(rp, 1, rsys);
    c.expect(r_low && *r_low == kRefLowPrioResponse,
             fmt("reference low-priority response %lld != %lld",
                 r_low ? (long long)*r_low : -1LL, (long long)kRefLowPrioResponse));
    c.expect(r_high && *r_high == kRefHighPrioResponse,
             fmt("reference high-priority response %lld != %lld",
                 r_high ? (long long)*r_high : -1LL, (long long)kRefHighPrioResponse));
    c.expect(analyze(rp, rsys).schedulable, "reference pair not schedulable");

    SystemParams sys;
    CostProfile prof;
    long residuals = 0;
    for (int s = 0; s < kResidualSets && c.ok; ++s) {
        TaskSet ts = generate(spread_params(s), sys, prof,
                              derive_seed(0xACCE9702, std::uint64_t(s), 0, 0));
        AnalysisResult res = analyze(ts, sys);
        for (const TaskAnalysis& row : res.rows) {
            const Task& t = ts.by_id(row.id);
            if (row.r_lo) {
                c.expect(rhs_lo(ts, t, sys, *row.r_lo) == *row.r_lo,
                         fmt("set %d task %d: r_lo residual non-zero", s, t.id));
                ++residuals;
            }
            if (row.r_hi) {
                c.expect(rhs_hi(ts, t, sys, *row.r_hi) == *row.r_hi,
                         fmt("set %d task %d: r_hi residual non-zero", s, t.id));
                ++residuals;
            }
            if (row.r_star && row.r_lo) {
                c.expect(rhs_star(ts, t, sys, *row.r_lo, *row.r_star) == *row.r_star,
                         fmt("set %d task %d: r_star residual non-zero", s, t.id));
                ++residuals;
            }
        }
    }
    c.expect(residuals > 300, fmt("only %ld residual checks ran", residuals));
    c.note = fmt("reference responses %lld/%lld reproduced; %ld zero residuals over "
                 "%d sets", (long long)kRefLowPrioResponse,
                 (long long)kRefHighPrioResponse, residuals, kResidualSets);
    secs = seconds_since(t0);
    return c;
}

// ---------------------------------------------------------------------------
// C3: analysis soundness against simulation
// ---------------------------------------------------------------------------

Criterion check_soundness(double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    SystemParams sys;
    CostProfile prof;
    int found = 0, attempts = 0;
    long long jobs = 0;
    while (found < kSoundnessSets && attempts < 4000) {
        ++attempts;
        GenParams gp;
        gp.n_tasks = 4 + attempts % 7;                        // 4..10
        gp.total_util = 0.30 + 0.05 * double(attempts % 8);   // 0.30..0.65
        gp.crit_proportion = 0.20 + 0.06 * double(attempts % 9);
        gp.acc_proportion = (attempts % 5 == 0) ? 0.8 : 1.0;
        gp.c_lo_min = 50000;
        gp.c_lo_max = 1000000;
        TaskSet ts = generate(gp, sys, prof,
                              derive_seed(0xACCE9703, std::uint64_t(attempts), 0, 0));
        // Keep the 20-period horizon tractable.
        if (ts.max_period() > 250000000) continue;
        if (!analyze(ts, sys).schedulable) continue;
        ++found;
        SimConfig cfg;
        cfg.horizon = 0;  // simulator default: 20 x largest period
        cfg.seed = derive_seed(0xACCE9703, std::uint64_t(attempts), 0, 1);
        cfg.sys = sys;
        cfg.profile = prof;
        SimMetrics m = simulate(ts, cfg);
        jobs += m.lo.released + m.hi.released;
        c.expect(m.lo.missed == 0 && m.hi.missed == 0,
                 fmt("declared-schedulable set (attempt %d) missed deadlines: lo=%ld hi=%ld",
                     attempts, m.lo.missed, m.hi.missed));
        if (!c.ok) break;
    }
    c.expect(found == kSoundnessSets,
             fmt("only %d/%d schedulable sets found in %d attempts", found,
                 kSoundnessSets, attempts));
    secs = seconds_since(t0);
    c.expect(secs < kSoundnessMaxSeconds,
             fmt("runtime %.1fs exceeds %.0fs budget", secs, kSoundnessMaxSeconds));
    c.note = fmt("%d schedulable sets (of %d generated), %lld jobs simulated, zero "
                 "misses", found, attempts, jobs);
    return c;
}

// ---------------------------------------------------------------------------
// C4 + C6 shared scenario: paired runs, no-preemption vs instruction-level
// ---------------------------------------------------------------------------

struct InversionStats {
    Pool pi_np, ci_np, pi_il, ci_il;
    double secs = 0.0;
};

InversionStats run_inversion_scenario() {
    auto t0 = Clock::now();
    InversionStats st;
    SystemParams sys;
    CostProfile prof;
    for (int s = 0; s < 60; ++s) {
        GenParams gp;
        gp.n_tasks = 6;
        gp.total_util = 0.5;
        // Three HI tasks of six: raised-mode residency (the HI set plus at
        // most one retained LO) stays close to scratchpad capacity, while
        // LO-mode residency oversubscribes it -- the average-case asymmetry
        // behind the ci/pi ordering check fed from this scenario.
        gp.crit_proportion = 0.34;
        gp.acc_proportion = 1.0;
        gp.c_lo_min = 2000000;  // medium workloads: >= 1e6 cycles per job
        gp.c_lo_max = 8000000;
        gp.footprint_min = 70000;  // 3 banks per task
        gp.footprint_max = 98304;
        TaskSet ts = generate(gp, sys, prof,
                              derive_seed(0xACCE9704, std::uint64_t(s), 0, 0));
        for (PreemptionMode pm : {PreemptionMode::None, PreemptionMode::Instruction}) {
            SimConfig cfg;
            cfg.horizon = 200000000;
            cfg.seed = derive_seed(0xACCE9704, std::uint64_t(s), 0, 1);
            cfg.preemption = pm;
            cfg.overrun_prob = 0.3;
            cfg.overrun_scale = 2.0;
            cfg.sys = sys;
            cfg.profile = prof;
            SimMetrics m = simulate(ts, cfg);
            if (pm == PreemptionMode::None) {
                st.pi_np.add(m.pi_inversions);
                st.ci_np.add(m.ci_inversions);
            } else {
                st.pi_il.add(m.pi_inversions);
                st.ci_il.add(m.ci_inversions);
            }
        }
    }
    st.secs = seconds_since(t0);
    return st;
}

Criterion check_speedup(const InversionStats& st, double& secs) {
    Criterion c;
    secs = st.secs;
    c.expect(st.pi_np.n > 0 && st.pi_il.n > 0 && st.ci_np.n > 0 && st.ci_il.n > 0,
             fmt("missing episodes: pi np/il %lld/%lld, ci np/il %lld/%lld",
                 st.pi_np.n, st.pi_il.n, st.ci_np.n, st.ci_il.n));
    if (!c.ok) return c;
    double pi_ratio = st.pi_np.mean() / st.pi_il.mean();
    double ci_ratio = st.ci_np.mean() / st.ci_il.mean();
    c.expect(pi_ratio >= kMinPiSpeedup,
             fmt("pi speedup %.1fx below %.0fx (np mean %.0f, il mean %.0f)",
                 pi_ratio, kMinPiSpeedup, st.pi_np.mean(), st.pi_il.mean()));
    c.expect(ci_ratio >= kMinCiSpeedup,
             fmt("ci speedup %.1fx below %.0fx (np mean %.0f, il mean %.0f)",
                 ci_ratio, kMinCiSpeedup, st.ci_np.mean(), st.ci_il.mean()));
    c.expect(secs < kSpeedupMaxSeconds,
             fmt("runtime %.1fs exceeds %.0fs budget", secs, kSpeedupMaxSeconds));
    c.note = fmt("pi speedup %.0fx, ci speedup %.0fx (means np pi=%.0f ci=%.0f, "
                 "il pi=%.0f ci=%.0f; il episodes pi=%lld ci=%lld)",
                 pi_ratio, ci_ratio, st.pi_np.mean(), st.ci_np.mean(),
                 st.pi_il.mean(), st.ci_il.mean(), st.pi_il.n, st.ci_il.n);
    return c;
}

Criterion check_ci_below_pi(const InversionStats& st, double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    c.expect(st.pi_il.n > 0 && st.ci_il.n > 0,
             fmt("missing episodes under defaults: pi %lld, ci %lld", st.pi_il.n,
                 st.ci_il.n));
    if (c.ok) {
        c.expect(st.ci_il.mean() <= st.pi_il.mean(),
                 fmt("mean ci %.0f exceeds mean pi %.0f", st.ci_il.mean(),
                     st.pi_il.mean()));
        c.note = fmt("mean ci %.0f <= mean pi %.0f cycles over %lld/%lld episodes",
                     st.ci_il.mean(), st.pi_il.mean(), st.ci_il.n, st.pi_il.n);
    }
    secs = seconds_since(t0);
    return c;
}

// ---------------------------------------------------------------------------
// C5: bank retention effect on switch cost
// ---------------------------------------------------------------------------

Criterion check_bank_effect(double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    SystemParams sys;
    CostProfile prof;
    Pool on_save, on_restore, off_save, off_restore;
    for (int s = 0; s < 30; ++s) {
        GenParams gp;
        gp.n_tasks = 6;
        gp.total_util = 0.5;
        gp.crit_proportion = 0.5;
        gp.acc_proportion = 1.0;
        gp.c_lo_min = 1000000;
        gp.c_lo_max = 4000000;
        gp.footprint_min = 20000;  // single-bank footprints
        gp.footprint_max = 32768;
        TaskSet ts = generate(gp, sys, prof,
                              derive_seed(0xACCE9705, std::uint64_t(s), 0, 0));
        for (bool bank : {true, false}) {
            SimConfig cfg;
            cfg.horizon = 200000000;
            cfg.seed = derive_seed(0xACCE9705, std::uint64_t(s), 0, 1);
            cfg.bank_model = bank;
            cfg.sys = sys;
            cfg.profile = prof;
            SimMetrics m = simulate(ts, cfg);
            (bank ? on_save : off_save).add(m.save_cycles);
            (bank ? on_restore : off_restore).add(m.restore_cycles);
        }
    }
    c.expect(on_save.n > 100 && off_save.n > 100 && on_restore.n > 0 &&
                 off_restore.n > 0,
             fmt("too few switches: saves on/off %lld/%lld", on_save.n, off_save.n));
    if (c.ok) {
        double with_cost = on_save.mean() + on_restore.mean();
        double without_cost = off_save.mean() + off_restore.mean();
        double delta = without_cost - with_cost;
        double ratio = delta / with_cost;
        c.expect(delta >= kBankDeltaLow && delta <= kBankDeltaHigh,
                 fmt("save+restore delta %.0f outside [%.0f, %.0f]", delta,
                     kBankDeltaLow, kBankDeltaHigh));
        c.expect(ratio >= kBankRatioLow && ratio <= kBankRatioHigh,
                 fmt("relative increase %.2f outside [%.2f, %.2f]", ratio,
                     kBankRatioLow, kBankRatioHigh));
        c.note = fmt("disabling bank retention adds %.0f cycles (+%.0f%%) to mean "
                     "save+restore (%.0f -> %.0f)", delta, 100.0 * ratio, with_cost,
                     without_cost);
    }
    secs = seconds_since(t0);
    return c;
}

// ---------------------------------------------------------------------------
// C7: successful-ratio curve separation
// ---------------------------------------------------------------------------

const PointStats* find_row(const std::vector<PointStats>& rows, double value,
                           const std::string& variant) {
    for (const auto& r : rows)
        if (std::abs(r.value - value) < 1e-9 && r.variant == variant) return &r;
    return nullptr;
}

Criterion check_success_curves(double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    ExperimentSpec es;
    es.util_grid = {0.5, 0.65, 0.75, 0.85, 0.95};
    es.sets_per_point = int(kCurveSetsPerPoint);
    es.gen.n_tasks = 10;
    es.gen.crit_proportion = 0.5;
    es.gen.acc_proportion = 1.0;
    // Budgets spread across two orders of magnitude, like a mix of light and
    // heavy kernels: every set then holds both tight-deadline tasks (fatal to
    // a non-preemptable engine) and long operators to block on.
    es.gen.c_lo_min = 300000;
    es.gen.c_lo_max = 20000000;
    es.gen.c_lo_log_uniform = true;
    // Disturbances stay rare: raised-mode dwell parks LO tasks regardless of
    // preemption granularity, and the curve contrast under test is the
    // engine's preemptability, not mode-switch frequency.
    es.overrun_prob = 0.006;
    es.overrun_scale = 1.2;
    es.horizon = 300000000;
    es.variants = {{"instr", Policy::Mesc, PreemptionMode::Instruction, true},
                   {"nopreempt", Policy::Mesc, PreemptionMode::None, true}};
    es.master_seed = 0xACCE9707;
    ExperimentResult res = run_experiment(es);

    std::string curve;
    for (double u : es.util_grid) {
        const PointStats* il = find_row(res.util_rows, u, "instr");
        const PointStats* np = find_row(res.util_rows, u, "nopreempt");
        c.expect(il != nullptr && np != nullptr, fmt("missing rows at U=%.2f", u));
        if (!il || !np) continue;
        c.expect(il->success_ratio >= np->success_ratio - kCurveDominanceTol,
                 fmt("U=%.2f: preemptive %.2f below non-preemptive %.2f beyond "
                     "tolerance", u, il->success_ratio, np->success_ratio));
        curve += fmt("%s%.2f:%.2f/%.2f", curve.empty() ? "" : " ", u,
                     il->success_ratio, np->success_ratio);
    }
    const PointStats* il85 = find_row(res.util_rows, 0.85, "instr");
    const PointStats* np85 = find_row(res.util_rows, 0.85, "nopreempt");
    if (il85 && np85) {
        double without_max =
            kCurveWithoutBase + binom_halfwidth(kCurveWithoutBase, es.sets_per_point);
        double with_min =
            kCurveWithBase - binom_halfwidth(kCurveWithBase, es.sets_per_point);
        c.expect(np85->success_ratio <= without_max,
                 fmt("U=0.85 non-preemptive success %.3f above ceiling %.3f",
                     np85->success_ratio, without_max));
        c.expect(il85->success_ratio >= with_min,
                 fmt("U=0.85 instruction-level success %.3f below floor %.3f",
                     il85->success_ratio, with_min));
    }
    c.note = fmt("instr/nopreempt success by U: %s", curve.c_str());
    secs = seconds_since(t0);
    return c;
}

// ---------------------------------------------------------------------------
// C8: criticality-proportion and set-size trends
// ---------------------------------------------------------------------------

Criterion check_trends(double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    ExperimentSpec es;
    es.util_grid.clear();
    es.gamma_grid = {0.2, 0.4, 0.6, 0.8};
    es.gamma_util = 0.7;
    es.beta_grid = {5, 10, 20};
    es.beta_util = 0.7;
    es.sets_per_point = 100;
    es.gen.n_tasks = 10;
    es.gen.acc_proportion = 1.0;
    es.gen.c_lo_min = 1000000;
    es.gen.c_lo_max = 5000000;
    es.overrun_prob = 0.25;
    es.overrun_scale = 1.5;
    es.horizon = 300000000;
    es.variants = {{"instr", Policy::Mesc, PreemptionMode::Instruction, true}};
    es.master_seed = 0xACCE9708;
    ExperimentResult res = run_experiment(es);

    c.expect(res.gamma_rows.size() == es.gamma_grid.size(),
             fmt("expected %zu gamma rows, got %zu", es.gamma_grid.size(),
                 res.gamma_rows.size()));
    std::string gnote;
    for (std::size_t i = 0; i < res.gamma_rows.size(); ++i) {
        const PointStats& p = res.gamma_rows[i];
        c.expect(p.survivability_runs >= 10,
                 fmt("gamma=%.1f: only %d runs saw a HI episode", p.value,
                     p.survivability_runs));
        gnote += fmt("%s%.1f:%.2f/%.2f", gnote.empty() ? "" : " ", p.value,
                     p.success_ratio, p.survivability);
        if (i == 0) continue;
        const PointStats& q = res.gamma_rows[i - 1];
        c.expect(p.success_ratio <= q.success_ratio + kTrendTol,
                 fmt("success rose %.2f -> %.2f from gamma %.1f to %.1f",
                     q.success_ratio, p.success_ratio, q.value, p.value));
        c.expect(p.survivability <= q.survivability + kTrendTol,
                 fmt("survivability rose %.2f -> %.2f from gamma %.1f to %.1f",
                     q.survivability, p.survivability, q.value, p.value));
    }

    c.expect(res.beta_rows.size() == es.beta_grid.size(),
             fmt("expected %zu beta rows, got %zu", es.beta_grid.size(),
                 res.beta_rows.size()));
    double smin = 2.0, smax = -1.0;
    std::string bnote;
    for (const PointStats& p : res.beta_rows) {
        c.expect(p.survivability_runs >= 10,
                 fmt("beta=%.0f: only %d runs saw a HI episode", p.value,
                     p.survivability_runs));
        smin = std::min(smin, p.survivability);
        smax = std::max(smax, p.survivability);
        bnote += fmt("%s%.0f:%.2f", bnote.empty() ? "" : " ", p.value,
                     p.survivability);
    }
    if (smax >= 0.0)
        c.expect(smax - smin <= kBetaSurvSpread,
                 fmt("survivability spread %.2f over beta grid exceeds %.2f",
                     smax - smin, kBetaSurvSpread));
    c.note = fmt("gamma succ/surv: %s | beta surv: %s", gnote.c_str(), bnote.c_str());
    secs = seconds_since(t0);
    return c;
}

// ---------------------------------------------------------------------------
// C9: structural invariants and determinism
// ---------------------------------------------------------------------------

Criterion check_invariants(double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    SystemParams sys;
    CostProfile prof;
    int runs = 0, det_checks = 0;
    for (int s = 0; s < kStressSets && c.ok; ++s) {
        GenParams gp;
        gp.n_tasks = 3 + s % 8;
        gp.total_util = 0.30 + 0.05 * double(s % 10);
        gp.crit_proportion = 0.25 + 0.05 * double(s % 10);
        gp.acc_proportion = (s % 3 == 0) ? 0.7 : 1.0;
        gp.c_lo_min = 100000;
        gp.c_lo_max = 2000000;
        TaskSet ts = generate(gp, sys, prof,
                              derive_seed(0xACCE9709, std::uint64_t(s), 0, 0));
        for (PreemptionMode pm : {PreemptionMode::None, PreemptionMode::Limited,
                                  PreemptionMode::Instruction}) {
            for (Policy pol : {Policy::Mesc, Policy::Amc}) {
                SimConfig cfg;
                cfg.horizon = 100000000;
                cfg.seed = derive_seed(0xACCE9709, std::uint64_t(s), 1, 0);
                cfg.preemption = pm;
                cfg.policy = pol;
                cfg.overrun_prob = 0.4;
                cfg.overrun_scale = 1.8;
                cfg.sys = sys;
                cfg.profile = prof;
                try {
                    SimMetrics m = simulate(ts, cfg);
                    c.expect(m.lo.released == m.lo.completed + m.lo.missed +
                                                  m.lo.dropped + m.lo.in_flight,
                             fmt("set %d %s/%s: LO accounting leak", s,
                                 to_string(pm), to_string(pol)));
                    c.expect(m.hi.released == m.hi.completed + m.hi.missed +
                                                  m.hi.dropped + m.hi.in_flight,
                             fmt("set %d %s/%s: HI accounting leak", s,
                                 to_string(pm), to_string(pol)));
                    ++runs;
                } catch (const std::exception& e) {
                    c.expect(false, fmt("set %d %s/%s: %s", s, to_string(pm),
                                        to_string(pol), e.what()));
                }
            }
        }
        if (s % 5 == 0) {
            SimConfig cfg;
            cfg.horizon = 100000000;
            cfg.seed = derive_seed(0xACCE9709, std::uint64_t(s), 2, 0);
            cfg.overrun_prob = 0.4;
            cfg.overrun_scale = 1.8;
            cfg.record_events = true;
            cfg.sys = sys;
            cfg.profile = prof;
            SimMetrics m1 = simulate(ts, cfg);
            SimMetrics m2 = simulate(ts, cfg);
            c.expect(m1 == m2, fmt("set %d: repeat run diverged", s));
            c.expect(metrics_to_json(m1, cfg).dump() == metrics_to_json(m2, cfg).dump(),
                     fmt("set %d: serialized metrics diverged", s));
            ++det_checks;
        }
    }
    c.note = fmt("%d stress runs across 3 preemption modes x 2 policies, %d "
                 "bit-exact repeat checks; internal assertions stayed quiet", runs,
                 det_checks);
    secs = seconds_since(t0);
    return c;
}

// ---------------------------------------------------------------------------
// C10: utilization generator statistics
// ---------------------------------------------------------------------------

Criterion check_uunifast(double& secs) {
    auto t0 = Clock::now();
    Criterion c;
    std::mt19937_64 rng(0xACCE9710ULL);
    for (int k = 0; k < kUunifastDraws && c.ok; ++k) {
        int n = 2 + k % 49;
        double total = 0.05 + 0.009 * double(k % 100);
        std::vector<double> u = uunifast(n, total, rng);
        c.expect(int(u.size()) == n, fmt("draw %d: wrong count", k));
        double sum = 0.0;
        for (double v : u) {
            sum += v;
            c.expect(v > 0.0 && v < total,
                     fmt("draw %d: component %.3g outside (0, %.3g)", k, v, total));
        }
        c.expect(std::abs(sum - total) <= kUunifastSumTol,
                 fmt("draw %d: sum off by %.3g", k, std::abs(sum - total)));
    }
    c.note = fmt("%d draws, n in [2,50]: sums within %.0e, all components in (0, U)",
                 kUunifastDraws, kUunifastSumTol);
    secs = seconds_since(t0);
    return c;
}

}  // namespace

int main() {
    struct Entry {
        int idx;
        std::string title;
        Criterion crit;
        double secs = 0.0;
    };
    std::vector<Entry> entries;

    auto run = [&](int idx, const std::string& title, auto&& fn) {
        Entry e;
        e.idx = idx;
        e.title = title;
        try {
            e.crit = fn(e.secs);
        } catch (const std::exception& ex) {
            e.crit.ok = false;
            e.crit.problems.push_back(std::string("unexpected exception: ") + ex.what());
        }
        report(e.idx, e.title, e.crit, e.secs);
        entries.push_back(std::move(e));
    };

    run(1, "blocking-term identities", [](double& s) { return check_identities(s); });
    run(2, "fixed-point residuals and reference response times",
        [](double& s) { return check_fixed_points(s); });
    run(3, "analysis soundness against simulation",
        [](double& s) { return check_soundness(s); });

    InversionStats inv = run_inversion_scenario();
    run(4, "preemption-granularity inversion speedup",
        [&](double& s) { return check_speedup(inv, s); });
    run(5, "bank-retention effect on switch cost",
        [](double& s) { return check_bank_effect(s); });
    run(6, "criticality- vs priority-inversion ordering",
        [&](double& s) { return check_ci_below_pi(inv, s); });
    run(7, "successful-ratio curve separation",
        [](double& s) { return check_success_curves(s); });
    run(8, "criticality-proportion and set-size trends",
        [](double& s) { return check_trends(s); });
    run(9, "structural invariants and determinism",
        [](double& s) { return check_invariants(s); });
    run(10, "utilization generator statistics",
        [](double& s) { return check_uunifast(s); });

    int passed = 0;
    for (const auto& e : entries)
        if (e.crit.ok) ++passed;
    std::printf("acceptance: %d/%zu criteria passed\n", passed, entries.size());
    return passed == int(entries.size()) ? 0 : 1;
}
