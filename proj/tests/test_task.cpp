#include <doctest.h>

#include <random>

#include "mesc/task.hpp"
#include "mesc/trace.hpp"

using namespace mesc;

namespace {

Task cpu_task(TaskId id, Priority prio, Cycles period, Cycles c_lo, Cycles c_hi,
              CritLevel lvl) {
    Task t;
    t.id = id;
    t.priority = prio;
    t.period = period;
    t.deadline = period;
    t.c_lo = c_lo;
    t.c_hi = c_hi;
    t.level = lvl;
    return t;
}

Task acc_task(TaskId id, Priority prio, Cycles period, Cycles c_lo, Cycles c_hi,
              CritLevel lvl, int banks, unsigned seed) {
    Task t = cpu_task(id, prio, period, c_lo, c_hi, lvl);
    t.banks = banks;
    t.footprint_bytes = banks * 32768;
    std::mt19937_64 rng(seed);
    CostProfile p;
    t.trace = std::make_shared<InstructionTrace>(
        make_trace(c_lo, t.footprint_bytes, rng, p));
    return t;
}

}  // namespace

TEST_CASE("task validation rules") {
    Task t = cpu_task(1, 1, 100000, 10000, 10000, CritLevel::Lo);
    CHECK_NOTHROW(t.validate());

    SUBCASE("deadline past period") {
        t.deadline = t.period + 1;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
    SUBCASE("budget inversion") {
        t.level = CritLevel::Hi;
        t.c_hi = t.c_lo - 1;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
    SUBCASE("low-criticality tasks get one budget") {
        t.c_hi = t.c_lo + 1;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
    SUBCASE("accelerator tasks need a trace") {
        t.banks = 2;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }
}

TEST_CASE("set construction rejects duplicates") {
    TaskSet ts;
    ts.add(cpu_task(1, 1, 100000, 10000, 10000, CritLevel::Lo));
    CHECK_THROWS_AS(ts.add(cpu_task(1, 2, 100000, 10000, 10000, CritLevel::Lo)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ts.add(cpu_task(2, 1, 100000, 10000, 10000, CritLevel::Lo)),
                    std::invalid_argument);
}

TEST_CASE("priority partition around a pivot") {
    TaskSet ts;
    ts.add(acc_task(1, 1, 4000000, 300000, 600000, CritLevel::Hi, 1, 1));
    ts.add(cpu_task(2, 2, 5000000, 200000, 200000, CritLevel::Lo));
    ts.add(acc_task(3, 3, 6000000, 400000, 800000, CritLevel::Hi, 2, 2));
    ts.add(cpu_task(4, 4, 7000000, 100000, 100000, CritLevel::Lo));
    ts.add(acc_task(5, 5, 8000000, 250000, 250000, CritLevel::Lo, 1, 3));

    PriorityPartition p = partition(ts, 3);
    auto ids = [](const TaskSet& s) {
        std::vector<TaskId> out;
        for (const Task& t : s) out.push_back(t.id);
        return out;
    };
    CHECK(ids(p.hp_hi) == std::vector<TaskId>{1});
    CHECK(ids(p.hp_lo) == std::vector<TaskId>{2});
    CHECK(ids(p.lp_hi).empty());
    CHECK(ids(p.lp_lo) == std::vector<TaskId>{4, 5});
}

TEST_CASE("utilisation accumulates across the set") {
    TaskSet ts;
    ts.add(cpu_task(1, 1, 100000, 25000, 25000, CritLevel::Lo));
    ts.add(cpu_task(2, 2, 200000, 50000, 50000, CritLevel::Lo));
    CHECK(ts.total_utilization_lo() == doctest::Approx(0.5));
    CHECK(ts.max_period() == 200000);
}

TEST_CASE("longest instruction over accelerator tasks") {
    TaskSet ts;
    ts.add(cpu_task(1, 1, 1000000, 10000, 10000, CritLevel::Lo));
    CHECK(longest_instruction(ts) == 0);
    ts.add(acc_task(2, 2, 4000000, 500000, 500000, CritLevel::Lo, 1, 9));
    CHECK(longest_instruction(ts) == ts.by_id(2).trace->max_instr_cycles());
}
