#include "mesc/io.hpp"

#include <fstream>
#include <sstream>

namespace mesc {

namespace {

constexpr const char* kTasksetSchema = "mesc-taskset-v1";

InstrKind instr_kind_from(const std::string& s) {
    if (s == "config") return InstrKind::Config;
    if (s == "load") return InstrKind::Load;
    if (s == "store") return InstrKind::Store;
    if (s == "preload") return InstrKind::Preload;
    if (s == "compute") return InstrKind::Compute;
    if (s == "flush") return InstrKind::Flush;
    throw std::invalid_argument("unknown instruction kind: " + s);
}

ConfigClass config_class_from(const std::string& s) {
    if (s == "load") return ConfigClass::LoadCfg;
    if (s == "store") return ConfigClass::StoreCfg;
    if (s == "exec") return ConfigClass::ExecCfg;
    if (s == "norm") return ConfigClass::NormCfg;
    throw std::invalid_argument("unknown config class: " + s);
}

CritLevel level_from(const std::string& s) {
    if (s == "LO") return CritLevel::Lo;
    if (s == "HI") return CritLevel::Hi;
    throw std::invalid_argument("unknown criticality level: " + s);
}

json sys_to_json(const SystemParams& sys) {
    return json{{"total_banks", sys.total_banks},
                {"bank_size", sys.bank_size},
                {"remap_block_size", sys.remap_block_size},
                {"accumulator_size", sys.accumulator_size},
                {"t_sr", sys.t_sr},
                {"y_cpu_check", sys.y_cpu_check},
                {"y_cpu_switch", sys.y_cpu_switch},
                {"y_acc_save", sys.y_acc_save},
                {"y_acc_restore", sys.y_acc_restore}};
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

// All-optional parameter blocks accept any subset of their keys, so a typo
// would otherwise fall back to the default silently.
void reject_unknown(const json& j, const char* what,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument(std::string(what) + ": unknown key \"" +
                                        item.key() + "\"");
    }
}

}  // namespace

json taskset_to_json(const TaskSet& ts, const SystemParams& sys, std::uint64_t seed) {
    json tasks = json::array();
    for (const auto& t : ts) {
        json jt{{"id", t.id},
                {"priority", t.priority},
                {"period", t.period},
                {"deadline", t.deadline},
                {"c_lo", t.c_lo},
                {"c_hi", t.c_hi},
                {"level", to_string(t.level)},
                {"banks", t.banks},
                {"footprint_bytes", t.footprint_bytes}};
        if (t.uses_accelerator()) {
            json trace = json::array();
            for (const auto& in : t.trace->instrs) {
                json ji{{"kind", to_string(in.kind)}, {"cycles", in.cycles}};
                if (in.bytes > 0) ji["bytes"] = in.bytes;
                if (in.kind == InstrKind::Config) ji["cfg"] = to_string(in.cfg);
                if (in.operator_boundary) ji["boundary"] = true;
                trace.push_back(std::move(ji));
            }
            jt["trace"] = std::move(trace);
        }
        tasks.push_back(std::move(jt));
    }
    return json{{"schema", kTasksetSchema},
                {"seed", seed},
                {"sys", sys_to_json(sys)},
                {"tasks", std::move(tasks)}};
}

TaskSet taskset_from_json(const json& doc, SystemParams* sys_out,
                          std::uint64_t* seed_out) {
    if (!doc.is_object() || doc.value("schema", "") != kTasksetSchema)
        throw std::invalid_argument("task set document: bad or missing schema");
    if (seed_out) *seed_out = doc.value("seed", std::uint64_t(0));
    SystemParams sys = sysparams_from_json(doc.value("sys", json::object()));
    if (sys_out) *sys_out = sys;

    TaskSet ts;
    for (const auto& jt : doc.at("tasks")) {
        Task t;
        t.id = jt.at("id").get<TaskId>();
        t.priority = jt.at("priority").get<Priority>();
        t.period = jt.at("period").get<Cycles>();
        t.deadline = jt.at("deadline").get<Cycles>();
        t.c_lo = jt.at("c_lo").get<Cycles>();
        t.c_hi = jt.at("c_hi").get<Cycles>();
        t.level = level_from(jt.at("level").get<std::string>());
        t.banks = jt.value("banks", 0);
        t.footprint_bytes = jt.value("footprint_bytes", Cycles(0));
        if (jt.contains("trace")) {
            InstructionTrace trace;
            for (const auto& ji : jt.at("trace")) {
                Instruction in;
                in.kind = instr_kind_from(ji.at("kind").get<std::string>());
                in.cycles = ji.at("cycles").get<Cycles>();
                in.bytes = ji.value("bytes", Cycles(0));
                if (in.kind == InstrKind::Config)
                    in.cfg = config_class_from(ji.value("cfg", "exec"));
                in.operator_boundary = ji.value("boundary", false);
                trace.instrs.push_back(in);
            }
            t.trace = std::make_shared<const InstructionTrace>(std::move(trace));
        }
        ts.add(std::move(t));
    }
    return ts;
}

void save_taskset_file(const std::string& path, const TaskSet& ts,
                       const SystemParams& sys, std::uint64_t seed) {
    write_text_file(path, taskset_to_json(ts, sys, seed).dump(2) + "\n");
}

TaskSet load_taskset_file(const std::string& path, SystemParams* sys_out,
                          std::uint64_t* seed_out) {
    return taskset_from_json(json::parse(read_text_file(path)), sys_out, seed_out);
}

SystemParams sysparams_from_json(const json& j) {
    reject_unknown(j, "sys params",
                   {"total_banks", "bank_size", "remap_block_size",
                    "accumulator_size", "t_sr", "y_cpu_check", "y_cpu_switch",
                    "y_acc_save", "y_acc_restore"});
    SystemParams sys;
    maybe(j, "total_banks", sys.total_banks);
    maybe(j, "bank_size", sys.bank_size);
    maybe(j, "remap_block_size", sys.remap_block_size);
    maybe(j, "accumulator_size", sys.accumulator_size);
    maybe(j, "t_sr", sys.t_sr);
    maybe(j, "y_cpu_check", sys.y_cpu_check);
    maybe(j, "y_cpu_switch", sys.y_cpu_switch);
    maybe(j, "y_acc_save", sys.y_acc_save);
    maybe(j, "y_acc_restore", sys.y_acc_restore);
    sys.validate();
    return sys;
}

CostProfile costprofile_from_json(const json& j) {
    reject_unknown(j, "cost profile",
                   {"config_cycles", "dma_setup", "dma_beat_bytes",
                    "compute_min", "compute_max", "max_instr", "cpu_switch_base",
                    "step_beat_cycles", "redispatch_per_instr",
                    "max_inflight_queue"});
    CostProfile p;
    maybe(j, "config_cycles", p.config_cycles);
    maybe(j, "dma_setup", p.dma_setup);
    maybe(j, "dma_beat_bytes", p.dma_beat_bytes);
    maybe(j, "compute_min", p.compute_min);
    maybe(j, "compute_max", p.compute_max);
    maybe(j, "max_instr", p.max_instr);
    maybe(j, "cpu_switch_base", p.cpu_switch_base);
    maybe(j, "step_beat_cycles", p.step_beat_cycles);
    maybe(j, "redispatch_per_instr", p.redispatch_per_instr);
    maybe(j, "max_inflight_queue", p.max_inflight_queue);
    return p;
}

GenParams genparams_from_json(const json& j) {
    reject_unknown(j, "gen params",
                   {"n_tasks", "total_util", "crit_factor", "crit_proportion",
                    "acc_proportion", "c_lo_min", "c_lo_max", "c_lo_log_uniform",
                    "footprint_min", "footprint_max"});
    GenParams g;
    maybe(j, "n_tasks", g.n_tasks);
    maybe(j, "total_util", g.total_util);
    maybe(j, "crit_factor", g.crit_factor);
    maybe(j, "crit_proportion", g.crit_proportion);
    maybe(j, "acc_proportion", g.acc_proportion);
    maybe(j, "c_lo_min", g.c_lo_min);
    maybe(j, "c_lo_max", g.c_lo_max);
    maybe(j, "c_lo_log_uniform", g.c_lo_log_uniform);
    maybe(j, "footprint_min", g.footprint_min);
    maybe(j, "footprint_max", g.footprint_max);
    g.validate();
    return g;
}

std::string analysis_to_csv(const AnalysisResult& res) {
    std::ostringstream os;
    os << "#schema mesc-analysis v1\n";
    os << "id,level,pb_lo,b_lo,r_lo,pb_hi,cb_hi,b_hi,r_hi,r_star,verdict\n";
    auto opt = [](const std::optional<Cycles>& v) {
        return v ? std::to_string(*v) : std::string();
    };
    for (const auto& r : res.rows) {
        os << r.id << ',' << to_string(r.level) << ',' << r.pb_lo << ',' << r.b_lo
           << ',' << opt(r.r_lo) << ',';
        if (r.level == CritLevel::Hi)
            os << r.pb_hi << ',' << r.cb_hi << ',' << r.b_hi << ',' << opt(r.r_hi)
               << ',' << opt(r.r_star) << ',';
        else
            os << ",,,,,";
        os << (r.schedulable() ? "ok" : "unsched") << '\n';
    }
    return os.str();
}

std::string events_to_csv(const std::vector<TraceEvent>& events) {
    std::ostringstream os;
    os << "#schema mesc-events v1\n";
    os << "t,event,task,value\n";
    for (const auto& e : events)
        os << e.t << ',' << e.kind << ',' << e.task << ',' << e.value << '\n';
    return os.str();
}

json metrics_to_json(const SimMetrics& m, const SimConfig& cfg) {
    auto counts = [](const LevelCounts& c) {
        return json{{"released", c.released},
                    {"completed", c.completed},
                    {"missed", c.missed},
                    {"dropped", c.dropped},
                    {"in_flight", c.in_flight}};
    };
    auto stats = [](const std::vector<Cycles>& v) {
        return json{{"count", v.size()},
                    {"mean", mean_cycles(v)},
                    {"max", max_cycles(v)}};
    };
    json j{{"schema", "mesc-simrun-v1"},
           {"horizon", m.horizon},
           {"success", m.success()},
           {"lo", counts(m.lo)},
           {"hi", counts(m.hi)},
           {"mode_switches", m.mode_switches},
           {"engine_saves", m.engine_saves},
           {"lo_released_in_hi", m.lo_released_in_hi},
           {"lo_completed_in_hi", m.lo_completed_in_hi},
           {"pi_inversions", stats(m.pi_inversions)},
           {"ci_inversions", stats(m.ci_inversions)},
           {"saves", stats(m.save_cycles)},
           {"restores", stats(m.restore_cycles)},
           {"max_observed_drain", m.max_observed_drain}};
    auto sv = m.survivability();
    j["survivability"] = sv ? json(*sv) : json(nullptr);
    j["config"] = json{{"seed", cfg.seed},
                       {"policy", to_string(cfg.policy)},
                       {"preemption", to_string(cfg.preemption)},
                       {"bank_model", cfg.bank_model},
                       {"overrun_prob", cfg.overrun_prob},
                       {"overrun_scale", cfg.overrun_scale}};
    return j;
}

std::vector<ProfilePoint> profile_points_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<ProfilePoint> out;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b))
            throw std::invalid_argument("bank profile: malformed row: " + line);
        ProfilePoint p;
        p.banks = std::stoi(a);
        p.exec_cycles = std::stoll(b);
        out.push_back(p);
    }
    if (out.empty()) throw std::invalid_argument("bank profile: no data rows");
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace mesc
