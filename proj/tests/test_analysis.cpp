#include <doctest.h>

#include <utility>
#include <vector>

#include "mesc/analysis.hpp"
#include "mesc/trace.hpp"

using namespace mesc;

namespace {

// Hand-built trace: exact instruction durations so blocking terms are known.
std::shared_ptr<const InstructionTrace> fixed_trace(std::vector<Cycles> cycles) {
    InstructionTrace tr;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        Instruction in;
        in.kind = InstrKind::Compute;
        in.cycles = cycles[i];
        in.operator_boundary = (i + 1 == cycles.size());
        tr.instrs.push_back(in);
    }
    return std::make_shared<const InstructionTrace>(std::move(tr));
}

Task make(TaskId id, Priority prio, Cycles period, Cycles c_lo, Cycles c_hi,
          CritLevel lvl, std::vector<Cycles> instrs = {}) {
    Task t;
    t.id = id;
    t.priority = prio;
    t.period = period;
    t.deadline = period;
    t.c_lo = c_lo;
    t.c_hi = c_hi;
    t.level = lvl;
    if (!instrs.empty()) {
        t.banks = 1;
        t.footprint_bytes = 1024;
        t.trace = fixed_trace(std::move(instrs));
    }
    return t;
}

// Small, hand-checkable overhead constants (geometry left at defaults).
SystemParams small_sys() {
    SystemParams sys;
    sys.t_sr = 1000;
    sys.y_cpu_check = 50;
    sys.y_cpu_switch = 200;
    sys.y_acc_save = 3000;
    sys.y_acc_restore = 4000;
    return sys;
}

// Five tasks covering every quadrant around the pivot (id 3):
//   1  HI  accel  hp   longest instr 4000
//   2  LO  cpu    hp
//   3  HI  accel  pivot
//   4  LO  accel  lp   longest instr 9000
//   5  HI  accel  lp   longest instr 7000
TaskSet fixture() {
    TaskSet ts;
    ts.add(make(1, 1, 40000, 4000, 8000, CritLevel::Hi, {4000}));
    ts.add(make(2, 2, 60000, 6000, 6000, CritLevel::Lo));
    ts.add(make(3, 3, 200000, 20000, 30000, CritLevel::Hi, {10000, 10000}));
    ts.add(make(4, 4, 300000, 30000, 30000, CritLevel::Lo, {9000, 9000, 9000, 3000}));
    ts.add(make(5, 5, 400000, 10000, 40000, CritLevel::Hi, {7000, 3000}));
    return ts;
}

// Deliberately independent solver: naive narrow-integer loop, no shared code
// with the library beyond ceil_div.  terms = (period, per-release cost).
std::optional<Cycles> naive_rta(Cycles constant, Cycles deadline, Cycles t_sr,
                                Cycles y_check,
                                const std::vector<std::pair<Cycles, Cycles>>& terms) {
    Cycles r = constant;
    for (;;) {
        Cycles next = constant + ceil_div(r, t_sr) * y_check;
        for (const auto& [period, cost] : terms) next += ceil_div(r, period) * cost;
        if (next > deadline) return std::nullopt;
        if (next == r) return r;
        r = next;
    }
}

}  // namespace

TEST_CASE("blocking terms for the pivot task") {
    TaskSet ts = fixture();
    SystemParams sys = small_sys();
    // One lower-priority in-flight instruction + one scheduler period.
    CHECK(pi_blocking_lo(ts, 3, sys) == 9000 + 1000);
    CHECK(total_blocking_lo(ts, 3, sys) == 10000);
    CHECK(pi_blocking_hi(ts, 3, sys) == 7000 + 1000);   // HI blocker: task 5
    CHECK(ci_blocking_hi(ts, 3, sys) == 9000 + 1000);   // LO blocker: task 4
    CHECK(total_blocking_hi(ts, 3, sys) == 10000);      // max of the two

    // Top priority still suffers blocking from below.
    CHECK(pi_blocking_lo(ts, 1, sys) == 10000 + 1000);  // pivot's 10000 instr
    // Bottom priority has nobody below.
    CHECK(pi_blocking_lo(ts, 5, sys) == 0 + 1000);
}

TEST_CASE("pivot response times match the frozen hand computation") {
    TaskSet ts = fixture();
    SystemParams sys = small_sys();

    auto r_lo = response_time_lo(ts, 3, sys);
    REQUIRE(r_lo.has_value());
    CHECK(*r_lo == 75600);

    auto r_hi = response_time_hi(ts, 3, sys);
    REQUIRE(r_hi.has_value());
    CHECK(*r_hi == 96850);

    auto r_star = response_time_star(ts, 3, sys, *r_lo);
    REQUIRE(r_star.has_value());
    CHECK(*r_star == 110350);
}

TEST_CASE("top and bottom tasks match the frozen hand computation") {
    TaskSet ts = fixture();
    SystemParams sys = small_sys();
    CHECK(response_time_lo(ts, 1, sys) == 23200);
    CHECK(response_time_hi(ts, 1, sys) == 27400);
    CHECK(response_time_star(ts, 1, sys, 23200) == 27400);  // no LO above it
}

TEST_CASE("library agrees with an independent naive solver") {
    TaskSet ts = fixture();
    SystemParams sys = small_sys();
    Cycles sr = sys.y_acc_save + sys.y_acc_restore;

    // LO recurrence for the pivot: blocking 10000, budget 20000, CPU hp task 2
    // at 2*switch + c_lo, accelerator hp task 1 at save+restore + c_lo.
    auto lo = naive_rta(10000 + 20000 + sr, 200000, sys.t_sr, sys.y_cpu_check,
                        {{60000, 2 * sys.y_cpu_switch + 6000}, {40000, sr + 4000}});
    CHECK(lo == response_time_lo(ts, 3, sys));

    // HI recurrence: overrun budget, HI-only interference.
    auto hi = naive_rta(10000 + 30000 + sr, 200000, sys.t_sr, sys.y_cpu_check,
                        {{40000, sr + 8000}});
    CHECK(hi == response_time_hi(ts, 3, sys));

    // Transition: LO carry-over counted over the LO window, frozen into the
    // constant; HI interference iterates.
    Cycles lo_carry = ceil_div(*lo, 60000) * (2 * sys.y_cpu_switch + 6000);
    auto star = naive_rta(10000 + 30000 + sr + lo_carry, 200000, sys.t_sr,
                          sys.y_cpu_check, {{40000, sr + 8000}});
    CHECK(star == response_time_star(ts, 3, sys, *lo));
}

TEST_CASE("analysis verdict assembles per-task rows") {
    TaskSet ts = fixture();
    SystemParams sys = small_sys();
    AnalysisResult res = analyze(ts, sys);
    CHECK(res.rows.size() == 5);
    CHECK(res.schedulable);
    const TaskAnalysis& row = res.row_for(3);
    CHECK(row.level == CritLevel::Hi);
    CHECK(row.b_hi == std::max(row.pb_hi, row.cb_hi));
    CHECK(row.r_lo == 75600);
    CHECK(row.r_hi == 96850);
    CHECK(row.r_star == 110350);
    const TaskAnalysis& lo_row = res.row_for(4);
    CHECK_FALSE(lo_row.r_hi.has_value());  // LO task: no HI-mode columns
    CHECK(lo_row.pb_hi == 0);
    CHECK_THROWS_AS(res.row_for(99), std::out_of_range);
}

TEST_CASE("HI-mode queries reject LO pivots") {
    TaskSet ts = fixture();
    SystemParams sys = small_sys();
    CHECK_THROWS_AS(response_time_hi(ts, 2, sys), std::invalid_argument);
    CHECK_THROWS_AS(response_time_star(ts, 2, sys, 1000), std::invalid_argument);
    CHECK_THROWS_AS(response_time_star(ts, 3, sys, 0), std::invalid_argument);
}

TEST_CASE("overload reports unschedulable instead of a number") {
    TaskSet ts;
    ts.add(make(1, 1, 40000, 30000, 30000, CritLevel::Lo));
    ts.add(make(2, 2, 50000, 30000, 30000, CritLevel::Lo));
    SystemParams sys = small_sys();
    CHECK_FALSE(response_time_lo(ts, 2, sys).has_value());
    AnalysisResult res = analyze(ts, sys);
    CHECK_FALSE(res.schedulable);
    CHECK(res.row_for(1).schedulable());       // top task alone still fits
    CHECK_FALSE(res.row_for(2).schedulable());
}

TEST_CASE("empty set is trivially schedulable") {
    TaskSet ts;
    SystemParams sys = small_sys();
    AnalysisResult res = analyze(ts, sys);
    CHECK(res.rows.empty());
    CHECK(res.schedulable);
}

TEST_CASE("response times are monotone in the budgets") {
    TaskSet base = fixture();
    SystemParams sys = small_sys();
    auto r0 = response_time_lo(base, 3, sys);

    TaskSet heavier;
    for (Task t : base.tasks()) {
        if (t.id == 1) {
            t.c_lo += 1000;
            t.c_hi += 1000;
            t.trace = fixed_trace({5000});
        }
        heavier.add(std::move(t));
    }
    auto r1 = response_time_lo(heavier, 3, sys);
    REQUIRE(r0.has_value());
    REQUIRE(r1.has_value());
    CHECK(*r1 >= *r0);
}
