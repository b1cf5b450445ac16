#include "mesc/taskset_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mesc/bank_alloc.hpp"

namespace mesc {

void GenParams::validate() const {
    if (n_tasks < 1) throw std::invalid_argument("gen: n_tasks must be >= 1");
    if (!(total_util > 0.0) || !(total_util < 1.0))
        throw std::invalid_argument("gen: total_util must be in (0, 1)");
    if (crit_factor < 1.0) throw std::invalid_argument("gen: crit_factor must be >= 1");
    if (crit_proportion < 0.0 || crit_proportion > 1.0)
        throw std::invalid_argument("gen: crit_proportion must be in [0, 1]");
    if (acc_proportion < 0.0 || acc_proportion > 1.0)
        throw std::invalid_argument("gen: acc_proportion must be in [0, 1]");
    if (c_lo_min <= 0 || c_lo_max < c_lo_min)
        throw std::invalid_argument("gen: bad c_lo range");
    if (footprint_min < 0 || footprint_max < footprint_min)
        throw std::invalid_argument("gen: bad footprint range");
}

std::vector<double> uunifast_from_draws(int n, double total_util,
                                        const std::vector<double>& draws) {
    if (n < 1) throw std::invalid_argument("uunifast: n must be >= 1");
    if (!(total_util > 0.0))
        throw std::invalid_argument("uunifast: total_util must be positive");
    if (static_cast<int>(draws.size()) != n - 1)
        throw std::invalid_argument("uunifast: need exactly n-1 draws");
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(n));
    double sum = total_util;
    for (int i = 1; i < n; ++i) {
        double next = sum * std::pow(draws[static_cast<std::size_t>(i - 1)],
                                     1.0 / double(n - i));
        u.push_back(sum - next);
        sum = next;
    }
    u.push_back(sum);
    return u;
}

std::vector<double> uunifast(int n, double total_util, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> draws;
    draws.reserve(static_cast<std::size_t>(std::max(0, n - 1)));
    for (int i = 0; i < n - 1; ++i) draws.push_back(uni(rng));
    return uunifast_from_draws(n, total_util, draws);
}

TaskSet generate(const GenParams& params, const SystemParams& sys,
                 const CostProfile& profile, std::uint64_t seed) {
    params.validate();
    sys.validate();
    std::mt19937_64 rng(seed);
    const int n = params.n_tasks;

    std::vector<double> util = uunifast(n, params.total_util, rng);

    // Which tasks are HI, which use the accelerator: two independent
    // shuffled prefixes.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    int n_hi = static_cast<int>(std::ceil(params.crit_proportion * n - 1e-12));
    std::vector<bool> is_hi(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n_hi; ++i) is_hi[static_cast<std::size_t>(order[i])] = true;

    std::shuffle(order.begin(), order.end(), rng);
    int n_acc = static_cast<int>(std::lround(params.acc_proportion * n));
    std::vector<bool> is_acc(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n_acc; ++i) is_acc[static_cast<std::size_t>(order[i])] = true;

    std::uniform_int_distribution<Cycles> c_dist(params.c_lo_min, params.c_lo_max);
    std::uniform_real_distribution<double> c_log_dist(
        std::log(double(params.c_lo_min)), std::log(double(params.c_lo_max)));
    auto draw_c = [&]() -> Cycles {
        if (!params.c_lo_log_uniform) return c_dist(rng);
        return std::clamp<Cycles>(std::llround(std::exp(c_log_dist(rng))),
                                  params.c_lo_min, params.c_lo_max);
    };
    std::uniform_int_distribution<Cycles> fp_dist(params.footprint_min,
                                                  params.footprint_max);

    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Task t;
        t.id = i + 1;
        t.c_lo = draw_c();
        t.period = std::max<Cycles>(
            t.c_lo, std::llround(double(t.c_lo) / util[static_cast<std::size_t>(i)]));
        t.deadline = t.period;
        t.level = is_hi[static_cast<std::size_t>(i)] ? CritLevel::Hi : CritLevel::Lo;
        t.c_hi = t.level == CritLevel::Hi
                     ? std::max<Cycles>(t.c_lo, std::llround(params.crit_factor *
                                                             double(t.c_lo)))
                     : t.c_lo;
        if (is_acc[static_cast<std::size_t>(i)]) {
            t.footprint_bytes = fp_dist(rng);
            t.banks = min_banks_static(t.footprint_bytes, sys);
            t.trace = std::make_shared<const InstructionTrace>(
                make_trace(t.c_lo, t.footprint_bytes, rng, profile));
        }
        tasks.push_back(std::move(t));
    }

    // Rate-monotonic priorities: shorter period first, id breaks ties.
    std::vector<int> by_period(static_cast<std::size_t>(n));
    std::iota(by_period.begin(), by_period.end(), 0);
    std::sort(by_period.begin(), by_period.end(), [&](int a, int b) {
        const Task& ta = tasks[static_cast<std::size_t>(a)];
        const Task& tb = tasks[static_cast<std::size_t>(b)];
        if (ta.period != tb.period) return ta.period < tb.period;
        return ta.id < tb.id;
    });
    for (int rank = 0; rank < n; ++rank)
        tasks[static_cast<std::size_t>(by_period[static_cast<std::size_t>(rank)])]
            .priority = rank + 1;

    return TaskSet(std::move(tasks));
}

}  // namespace mesc
