#include "mesc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "mesc/analysis.hpp"
#include "mesc/io.hpp"

namespace mesc {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    // splitmix64 over a mixed key; cheap, stable, well spread.
    std::uint64_t x = master ^ (a * 0x9e3779b97f4a7c15ULL) ^
                      (b * 0xbf58476d1ce4e5b9ULL) ^ (c * 0x94d049bb133111ebULL);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

struct RunOutcome {
    bool analysis_schedulable = false;
    bool sim_success = false;
    bool had_episode = false;
    double survivability = 0.0;
    std::vector<Cycles> pi, ci, saves, restores;
};

struct WorkItem {
    std::string axis;
    double value = 0.0;
    std::uint64_t axis_idx = 0;
    int set_idx = 0;
    GenParams gen;
};

RunOutcome run_one(const ExperimentSpec& spec, const WorkItem& item,
                   const VariantSpec& var) {
    std::uint64_t gen_seed = derive_seed(spec.master_seed, item.axis_idx,
                                         std::uint64_t(item.set_idx), 0);
    TaskSet ts = generate(item.gen, spec.sys, spec.profile, gen_seed);

    RunOutcome out;
    out.analysis_schedulable = analyze(ts, spec.sys).schedulable;

    SimConfig cfg;
    cfg.sys = spec.sys;
    cfg.profile = spec.profile;
    cfg.policy = var.policy;
    cfg.preemption = var.preemption;
    cfg.bank_model = var.bank_model;
    cfg.overrun_prob = spec.overrun_prob;
    cfg.overrun_scale = spec.overrun_scale;
    cfg.horizon = spec.horizon;
    cfg.seed = derive_seed(spec.master_seed, item.axis_idx,
                           std::uint64_t(item.set_idx), 1);
    SimMetrics m = simulate(ts, cfg);
    out.sim_success = m.success();
    if (auto sv = m.survivability()) {
        out.had_episode = true;
        out.survivability = *sv;
    }
    out.pi = std::move(m.pi_inversions);
    out.ci = std::move(m.ci_inversions);
    out.saves = std::move(m.save_cycles);
    out.restores = std::move(m.restore_cycles);
    return out;
}

PointStats reduce(const std::string& axis, double value, const std::string& variant,
                  const std::vector<RunOutcome>& outs) {
    PointStats p;
    p.axis = axis;
    p.value = value;
    p.variant = variant;
    p.sets = int(outs.size());
    std::vector<Cycles> pi, ci, saves, restores;
    double surv = 0.0;
    for (const auto& o : outs) {
        p.analysis_schedulable += o.analysis_schedulable ? 1 : 0;
        p.sim_success += o.sim_success ? 1 : 0;
        if (o.had_episode) {
            p.survivability_runs += 1;
            surv += o.survivability;
        }
        pi.insert(pi.end(), o.pi.begin(), o.pi.end());
        ci.insert(ci.end(), o.ci.begin(), o.ci.end());
        saves.insert(saves.end(), o.saves.begin(), o.saves.end());
        restores.insert(restores.end(), o.restores.begin(), o.restores.end());
    }
    p.success_ratio = p.sets > 0 ? double(p.sim_success) / double(p.sets) : 0.0;
    p.survivability = p.survivability_runs > 0 ? surv / p.survivability_runs : 0.0;
    p.mean_pi = mean_cycles(pi);
    p.max_pi = max_cycles(pi);
    p.mean_ci = mean_cycles(ci);
    p.max_ci = max_cycles(ci);
    p.mean_save = mean_cycles(saves);
    p.mean_restore = mean_cycles(restores);
    return p;
}

std::vector<PointStats> sweep(const ExperimentSpec& spec, const std::string& axis,
                              const std::vector<WorkItem>& items) {
    if (items.empty()) return {};
    // One slot per (item, variant); workers fill slots, reduction is ordered,
    // so the result is independent of scheduling.
    const std::size_t nv = spec.variants.size();
    std::vector<RunOutcome> slots(items.size() * nv);
    std::atomic<std::size_t> cursor{0};
    int nthreads = spec.threads > 0
                       ? spec.threads
                       : int(std::max(1u, std::thread::hardware_concurrency()));
    auto worker = [&]() {
        while (true) {
            std::size_t k = cursor.fetch_add(1);
            if (k >= slots.size()) break;
            const WorkItem& item = items[k / nv];
            const VariantSpec& var = spec.variants[k % nv];
            slots[k] = run_one(spec, item, var);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // Group by (axis value, variant) preserving grid order.
    std::vector<PointStats> rows;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t jend = i;
        while (jend < items.size() && items[jend].value == items[i].value) ++jend;
        for (std::size_t v = 0; v < nv; ++v) {
            std::vector<RunOutcome> outs;
            for (std::size_t k = i; k < jend; ++k)
                outs.push_back(std::move(slots[k * nv + v]));
            rows.push_back(
                reduce(axis, items[i].value, spec.variants[v].name, outs));
        }
        i = jend;
    }
    return rows;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.variants.empty())
        throw std::invalid_argument("experiment: no variants configured");
    if (spec.sets_per_point < 1)
        throw std::invalid_argument("experiment: sets_per_point must be >= 1");
    ExperimentResult res;

    std::vector<WorkItem> items;
    for (std::size_t ui = 0; ui < spec.util_grid.size(); ++ui) {
        for (int s = 0; s < spec.sets_per_point; ++s) {
            WorkItem w;
            w.axis = "util";
            w.value = spec.util_grid[ui];
            w.axis_idx = 1000 + ui;
            w.set_idx = s;
            w.gen = spec.gen;
            w.gen.total_util = spec.util_grid[ui];
            items.push_back(std::move(w));
        }
    }
    res.util_rows = sweep(spec, "util", items);

    items.clear();
    for (std::size_t gi = 0; gi < spec.gamma_grid.size(); ++gi) {
        for (int s = 0; s < spec.sets_per_point; ++s) {
            WorkItem w;
            w.axis = "gamma";
            w.value = spec.gamma_grid[gi];
            w.axis_idx = 2000 + gi;
            w.set_idx = s;
            w.gen = spec.gen;
            w.gen.total_util = spec.gamma_util;
            w.gen.crit_proportion = spec.gamma_grid[gi];
            items.push_back(std::move(w));
        }
    }
    res.gamma_rows = sweep(spec, "gamma", items);

    items.clear();
    for (std::size_t bi = 0; bi < spec.beta_grid.size(); ++bi) {
        for (int s = 0; s < spec.sets_per_point; ++s) {
            WorkItem w;
            w.axis = "beta";
            w.value = double(spec.beta_grid[bi]);
            w.axis_idx = 3000 + bi;
            w.set_idx = s;
            w.gen = spec.gen;
            w.gen.total_util = spec.beta_util;
            w.gen.n_tasks = spec.beta_grid[bi];
            items.push_back(std::move(w));
        }
    }
    res.beta_rows = sweep(spec, "beta", items);

    return res;
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
    static constexpr const char* kKnown[] = {
        "util_grid", "gamma_grid",    "gamma_util",   "beta_grid",
        "beta_util", "sets_per_point", "gen",          "sys",
        "profile",   "overrun_prob",  "overrun_scale", "horizon",
        "master_seed", "threads",     "variants",     "schema"};
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : kKnown)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("experiment config: unknown key \"" +
                                        item.key() + "\"");
    }
    ExperimentSpec spec;
    if (j.contains("util_grid"))
        spec.util_grid = j.at("util_grid").get<std::vector<double>>();
    if (j.contains("gamma_grid"))
        spec.gamma_grid = j.at("gamma_grid").get<std::vector<double>>();
    if (j.contains("gamma_util")) spec.gamma_util = j.at("gamma_util").get<double>();
    if (j.contains("beta_grid"))
        spec.beta_grid = j.at("beta_grid").get<std::vector<int>>();
    if (j.contains("beta_util")) spec.beta_util = j.at("beta_util").get<double>();
    if (j.contains("sets_per_point"))
        spec.sets_per_point = j.at("sets_per_point").get<int>();
    if (j.contains("gen")) spec.gen = genparams_from_json(j.at("gen"));
    if (j.contains("sys")) spec.sys = sysparams_from_json(j.at("sys"));
    if (j.contains("profile")) spec.profile = costprofile_from_json(j.at("profile"));
    if (j.contains("overrun_prob"))
        spec.overrun_prob = j.at("overrun_prob").get<double>();
    if (j.contains("overrun_scale"))
        spec.overrun_scale = j.at("overrun_scale").get<double>();
    if (j.contains("horizon")) spec.horizon = j.at("horizon").get<Cycles>();
    if (j.contains("master_seed"))
        spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
    if (j.contains("variants")) {
        spec.variants.clear();
        for (const auto& jv : j.at("variants")) {
            for (const auto& item : jv.items())
                if (item.key() != "name" && item.key() != "policy" &&
                    item.key() != "preemption" && item.key() != "bank_model")
                    throw std::invalid_argument(
                        "experiment variant: unknown key \"" + item.key() +
                        "\"");
            VariantSpec v;
            v.name = jv.at("name").get<std::string>();
            if (jv.contains("policy"))
                v.policy = policy_from_string(jv.at("policy").get<std::string>());
            if (jv.contains("preemption"))
                v.preemption =
                    preemption_from_string(jv.at("preemption").get<std::string>());
            if (jv.contains("bank_model")) v.bank_model = jv.at("bank_model").get<bool>();
            spec.variants.push_back(std::move(v));
        }
    }
    return spec;
}

std::string points_to_csv(const std::vector<PointStats>& rows) {
    std::ostringstream os;
    os << "#schema mesc-experiment v1\n";
    os << "axis,value,variant,sets,analysis_schedulable,sim_success,success_ratio,"
          "survivability,survivability_runs,mean_pi,max_pi,mean_ci,max_ci,"
          "mean_save,mean_restore\n";
    char buf[64];
    for (const auto& p : rows) {
        std::snprintf(buf, sizeof buf, "%.4f", p.value);
        os << p.axis << ',' << buf << ',' << p.variant << ',' << p.sets << ','
           << p.analysis_schedulable << ',' << p.sim_success << ',';
        std::snprintf(buf, sizeof buf, "%.4f", p.success_ratio);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.4f", p.survivability);
        os << buf << ',' << p.survivability_runs << ',' << p.mean_pi << ','
           << p.max_pi << ',' << p.mean_ci << ',' << p.max_ci << ',' << p.mean_save
           << ',' << p.mean_restore << '\n';
    }
    return os.str();
}

std::string render_curves_svg(const std::string& title,
                              const std::vector<PointStats>& rows,
                              bool survivability) {
    // Fixed canvas, one polyline per variant, y in [0,1].
    constexpr int W = 640, H = 420, ML = 60, MR = 20, MT = 40, MB = 50;
    std::vector<std::string> variants;
    double xmin = 0, xmax = 1;
    bool first = true;
    for (const auto& p : rows) {
        if (std::find(variants.begin(), variants.end(), p.variant) == variants.end())
            variants.push_back(p.variant);
        if (first || p.value < xmin) xmin = p.value;
        if (first || p.value > xmax) xmax = p.value;
        first = false;
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    auto px = [&](double v) {
        return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto py = [&](double v) { return H - MB - v * (H - MT - MB); };
    char buf[160];
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    // Axes and gridlines.
    for (int i = 0; i <= 5; ++i) {
        double y = i / 5.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" "
                      "stroke=\"#dddddd\"/>\n",
                      ML, py(y), W - MR, py(y));
        os << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" "
                      "font-family=\"sans-serif\" font-size=\"11\">%.1f</text>\n",
                      ML - 6, py(y) + 4, y);
        os << buf;
    }
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[vi % 6]
           << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : rows) {
            if (p.variant != variants[vi]) continue;
            double v = survivability ? p.survivability : p.success_ratio;
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px(p.value), py(v));
            os << buf;
        }
        os << "\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                      "font-size=\"12\" fill=\"%s\">%s</text>\n",
                      ML + 10, MT + 16 * int(vi + 1), colors[vi % 6],
                      variants[vi].c_str());
        os << buf;
    }
    // Axis value labels along the bottom.
    double last_label = -1e300;
    for (const auto& p : rows) {
        if (p.variant != variants.front()) continue;
        if (p.value - last_label < (xmax - xmin) / 12.0) continue;
        last_label = p.value;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\" "
                      "font-family=\"sans-serif\" font-size=\"11\">%.2f</text>\n",
                      px(p.value), H - MB + 18, p.value);
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mesc
