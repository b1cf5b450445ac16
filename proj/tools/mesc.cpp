// Command-line front end: generate task sets, run the response-time analysis,
// simulate single runs, or drive a whole experiment campaign.
//
// Exit codes: 0 on success, 1 on runtime failure, 2 on bad usage.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mesc/analysis.hpp"
#include "mesc/experiment.hpp"
#include "mesc/io.hpp"
#include "mesc/sim.hpp"
#include "mesc/taskset_gen.hpp"

namespace fs = std::filesystem;
using mesc::json;

namespace {

struct GenCli {
    std::string config, out = ".";
    std::uint64_t seed = 1;
    int count = 1;
};

struct AnalyzeCli {
    std::string taskset, out;
};

struct SimCli {
    std::string taskset, config, out, trace;
    std::uint64_t seed = 1;
    mesc::Cycles horizon = 0;
    std::string preemption = "instr", policy = "mesc";
    double overrun_prob = 0.0, overrun_scale = 2.0;
    bool no_bank_model = false;
};

struct ExperimentCli {
    std::string config, out = ".";
    bool plots = false;
    int threads = 0;
};

std::string set_filename(int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "taskset_%04d.json", i);
    return buf;
}

int run_gen(const GenCli& cli) {
    mesc::GenParams gen;
    mesc::SystemParams sys;
    mesc::CostProfile profile;
    int count = cli.count;
    if (!cli.config.empty()) {
        json cfg = json::parse(mesc::read_text_file(cli.config));
        for (const auto& item : cfg.items()) {
            const std::string& key = item.key();
            if (key != "gen" && key != "sys" && key != "profile" &&
                key != "count" && key != "schema") {
                std::cerr << "error: unknown key \"" << key
                          << "\" in gen config (expected gen/sys/profile/count;"
                             " generator knobs go inside \"gen\")\n";
                return 1;
            }
        }
        if (cfg.contains("gen")) gen = mesc::genparams_from_json(cfg.at("gen"));
        if (cfg.contains("sys")) sys = mesc::sysparams_from_json(cfg.at("sys"));
        if (cfg.contains("profile"))
            profile = mesc::costprofile_from_json(cfg.at("profile"));
        if (cfg.contains("count")) count = cfg.at("count").get<int>();
    }
    fs::create_directories(cli.out);
    for (int i = 0; i < count; ++i) {
        std::uint64_t seed = mesc::derive_seed(cli.seed, 0xC0, std::uint64_t(i), 0);
        mesc::TaskSet ts = mesc::generate(gen, sys, profile, seed);
        fs::path path = fs::path(cli.out) / set_filename(i);
        mesc::save_taskset_file(path.string(), ts, sys, seed);
        std::cout << path.string() << "\n";
    }
    return 0;
}

int run_analyze(const AnalyzeCli& cli) {
    mesc::SystemParams sys;
    mesc::TaskSet ts = mesc::load_taskset_file(cli.taskset, &sys);
    mesc::AnalysisResult res = mesc::analyze(ts, sys);
    std::string csv = mesc::analysis_to_csv(res);
    if (cli.out.empty())
        std::cout << csv;
    else
        mesc::write_text_file(cli.out, csv);
    std::cerr << (res.schedulable ? "schedulable" : "unschedulable") << "\n";
    return 0;
}

int run_sim(const SimCli& cli) {
    mesc::SystemParams sys;
    mesc::TaskSet ts = mesc::load_taskset_file(cli.taskset, &sys);
    mesc::SimConfig cfg;
    cfg.sys = sys;
    if (!cli.config.empty()) {
        json j = json::parse(mesc::read_text_file(cli.config));
        for (const auto& item : j.items()) {
            const std::string& key = item.key();
            if (key != "sys" && key != "profile" && key != "schema") {
                std::cerr << "error: unknown key \"" << key
                          << "\" in sim config (expected sys/profile)\n";
                return 1;
            }
        }
        if (j.contains("sys")) cfg.sys = mesc::sysparams_from_json(j.at("sys"));
        if (j.contains("profile"))
            cfg.profile = mesc::costprofile_from_json(j.at("profile"));
    }
    cfg.seed = cli.seed;
    cfg.horizon = cli.horizon;
    cfg.preemption = mesc::preemption_from_string(cli.preemption);
    cfg.policy = mesc::policy_from_string(cli.policy);
    cfg.overrun_prob = cli.overrun_prob;
    cfg.overrun_scale = cli.overrun_scale;
    cfg.bank_model = !cli.no_bank_model;
    cfg.record_events = !cli.trace.empty();

    mesc::SimMetrics m = mesc::simulate(ts, cfg);
    if (!cli.trace.empty())
        mesc::write_text_file(cli.trace, mesc::events_to_csv(m.events));
    std::string out = mesc::metrics_to_json(m, cfg).dump(2) + "\n";
    if (cli.out.empty())
        std::cout << out;
    else
        mesc::write_text_file(cli.out, out);
    return 0;
}

int run_experiment_cmd(const ExperimentCli& cli) {
    json j = json::parse(mesc::read_text_file(cli.config));
    mesc::ExperimentSpec spec = mesc::experiment_spec_from_json(j);
    if (cli.threads > 0) spec.threads = cli.threads;
    mesc::ExperimentResult res = mesc::run_experiment(spec);

    fs::create_directories(cli.out);
    auto emit = [&](const std::vector<mesc::PointStats>& rows,
                    const std::string& stem, const std::string& title) {
        if (rows.empty()) return;
        fs::path base = fs::path(cli.out);
        mesc::write_text_file((base / (stem + ".csv")).string(),
                              mesc::points_to_csv(rows));
        std::cout << (base / (stem + ".csv")).string() << "\n";
        if (cli.plots) {
            mesc::write_text_file((base / (stem + "_success.svg")).string(),
                                  mesc::render_curves_svg(title + ": success ratio",
                                                          rows, false));
            mesc::write_text_file(
                (base / (stem + "_survivability.svg")).string(),
                mesc::render_curves_svg(title + ": survivability", rows, true));
            std::cout << (base / (stem + "_success.svg")).string() << "\n";
            std::cout << (base / (stem + "_survivability.svg")).string() << "\n";
        }
    };
    emit(res.util_rows, "util_sweep", "utilisation sweep");
    emit(res.gamma_rows, "gamma_sweep", "HI-proportion sweep");
    emit(res.beta_rows, "beta_sweep", "set-size sweep");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-criticality accelerator scheduling toolkit"};
    app.require_subcommand(1);

    GenCli gen_cli;
    auto* gen = app.add_subcommand("gen", "generate random task sets");
    gen->add_option("--config", gen_cli.config, "JSON config (gen/sys/profile/count)");
    gen->add_option("--seed", gen_cli.seed, "master seed");
    gen->add_option("--count", gen_cli.count, "number of sets");
    gen->add_option("--out", gen_cli.out, "output directory");

    AnalyzeCli an_cli;
    auto* an = app.add_subcommand("analyze", "response-time analysis of a task set");
    an->add_option("--taskset", an_cli.taskset, "task set JSON")->required();
    an->add_option("--out", an_cli.out, "CSV output path (default stdout)");

    SimCli sim_cli;
    auto* sim = app.add_subcommand("sim", "simulate one run of a task set");
    sim->add_option("--taskset", sim_cli.taskset, "task set JSON")->required();
    sim->add_option("--config", sim_cli.config, "JSON config (sys/profile overrides)");
    sim->add_option("--seed", sim_cli.seed, "simulation seed");
    sim->add_option("--horizon", sim_cli.horizon, "cycles (0 = 20 x largest period)");
    sim->add_option("--preemption", sim_cli.preemption, "none|limited|instr")
        ->check(CLI::IsMember({"none", "limited", "instr"}));
    sim->add_option("--policy", sim_cli.policy, "mesc|amc")
        ->check(CLI::IsMember({"mesc", "amc"}));
    sim->add_option("--overrun-prob", sim_cli.overrun_prob, "per HI job");
    sim->add_option("--overrun-scale", sim_cli.overrun_scale, "overrun demand factor");
    sim->add_flag("--no-bank-model", sim_cli.no_bank_model,
                  "disable scratchpad bank retention");
    sim->add_option("--trace", sim_cli.trace, "write event CSV here");
    sim->add_option("--out", sim_cli.out, "metrics JSON path (default stdout)");

    ExperimentCli exp_cli;
    auto* exp = app.add_subcommand("experiment", "run a sweep campaign");
    exp->add_option("--config", exp_cli.config, "experiment JSON")->required();
    exp->add_option("--out", exp_cli.out, "output directory");
    exp->add_option("--threads", exp_cli.threads, "worker threads (0 = auto)");
    exp->add_flag("--plots", exp_cli.plots, "also write SVG charts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return run_gen(gen_cli);
        if (an->parsed()) return run_analyze(an_cli);
        if (sim->parsed()) return run_sim(sim_cli);
        if (exp->parsed()) return run_experiment_cmd(exp_cli);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
