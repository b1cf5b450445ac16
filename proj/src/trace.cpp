#include "mesc/trace.hpp"

#include <algorithm>

namespace mesc {

const char* to_string(InstrKind k) {
    switch (k) {
        case InstrKind::Config: return "config";
        case InstrKind::Load: return "load";
        case InstrKind::Store: return "store";
        case InstrKind::Preload: return "preload";
        case InstrKind::Compute: return "compute";
        case InstrKind::Flush: return "flush";
    }
    return "?";
}

const char* to_string(ConfigClass c) {
    switch (c) {
        case ConfigClass::LoadCfg: return "load";
        case ConfigClass::StoreCfg: return "store";
        case ConfigClass::ExecCfg: return "exec";
        case ConfigClass::NormCfg: return "norm";
    }
    return "?";
}

Cycles InstructionTrace::total_cycles() const {
    Cycles sum = 0;
    for (const auto& in : instrs) sum += in.cycles;
    return sum;
}

Cycles InstructionTrace::max_instr_cycles() const {
    Cycles m = 0;
    for (const auto& in : instrs) m = std::max(m, in.cycles);
    return m;
}

void InstructionTrace::validate(const CostProfile& profile) const {
    for (const auto& in : instrs) {
        MESC_CHECK_MSG(in.cycles > 0, "instruction with non-positive duration");
        MESC_CHECK_MSG(in.cycles <= profile.max_instr,
                       "instruction exceeds max_instr bound: " << in.cycles);
        if (in.kind == InstrKind::Config)
            MESC_CHECK_MSG(in.cycles == profile.config_cycles,
                           "config instruction must cost " << profile.config_cycles);
        if (in.kind == InstrKind::Load || in.kind == InstrKind::Store)
            MESC_CHECK_MSG(in.bytes > 0, "transfer instruction without bytes");
    }
}

namespace {

// Split a transfer into chunks no larger than one bank's worth so loads map
// naturally onto scratchpad banks and stay far below the instruction bound.
constexpr Cycles kChunkBytes = 32 * 1024;

void append_transfers(std::vector<Instruction>& out, InstrKind kind, Cycles bytes,
                      const CostProfile& profile) {
    while (bytes > 0) {
        Cycles chunk = std::min(bytes, kChunkBytes);
        Instruction in;
        in.kind = kind;
        in.bytes = chunk;
        in.cycles = profile.transfer_cycles(chunk);
        out.push_back(in);
        bytes -= chunk;
    }
}

}  // namespace

InstructionTrace make_trace(Cycles total_cycles, Cycles footprint_bytes,
                            std::mt19937_64& rng, const CostProfile& profile) {
    if (total_cycles <= 0) throw std::invalid_argument("make_trace: total_cycles must be positive");
    if (footprint_bytes < 0) throw std::invalid_argument("make_trace: negative footprint");

    // Mandatory data movement: inputs in, results out.  Results come from the
    // accumulator, so they do not count against scratchpad residency.
    Cycles store_bytes = std::min(footprint_bytes / 4, Cycles(16 * 1024));
    Cycles load_bytes = footprint_bytes - store_bytes;

    std::vector<Instruction> loads, stores;
    append_transfers(loads, InstrKind::Load, load_bytes, profile);
    append_transfers(stores, InstrKind::Store, store_bytes, profile);

    Cycles mandatory = 0;
    for (const auto& in : loads) mandatory += in.cycles;
    for (const auto& in : stores) mandatory += in.cycles;

    // As many of the four config classes as the budget allows, at least one.
    int n_cfg = 0;
    for (int c = 4; c >= 1; --c) {
        if (profile.config_cycles * c + mandatory <= total_cycles) {
            n_cfg = c;
            break;
        }
    }
    if (n_cfg == 0)
        throw std::invalid_argument("make_trace: total_cycles too small for mandatory instructions");

    InstructionTrace trace;
    static const ConfigClass cfg_order[4] = {ConfigClass::LoadCfg, ConfigClass::ExecCfg,
                                             ConfigClass::NormCfg, ConfigClass::StoreCfg};
    for (int c = 0; c < n_cfg; ++c) {
        Instruction in;
        in.kind = InstrKind::Config;
        in.cfg = cfg_order[c];
        in.cycles = profile.config_cycles;
        trace.instrs.push_back(in);
    }
    trace.instrs.insert(trace.instrs.end(), loads.begin(), loads.end());

    Cycles rem = total_cycles - profile.config_cycles * n_cfg - mandatory;

    // Sampled compute body; the final remainder becomes one exact filler so
    // the trace sums to total_cycles precisely.
    std::uniform_int_distribution<Cycles> dur(profile.compute_min, profile.compute_max);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    while (rem > profile.max_instr) {
        Instruction in;
        in.kind = coin(rng) < 0.3 ? InstrKind::Preload : InstrKind::Compute;
        in.cycles = dur(rng);
        trace.instrs.push_back(in);
        rem -= in.cycles;
    }
    if (rem > 0) {
        Instruction in;
        in.kind = InstrKind::Compute;
        in.cycles = rem;
        trace.instrs.push_back(in);
    }
    trace.instrs.insert(trace.instrs.end(), stores.begin(), stores.end());

    // ~10 evenly spaced legal preemption points for limited-granularity mode.
    std::size_t n = trace.instrs.size();
    for (std::size_t k = 1; k <= 10; ++k) {
        std::size_t idx = (k * n) / 10;
        if (idx > 0) trace.instrs[idx - 1].operator_boundary = true;
    }

    MESC_CHECK(trace.total_cycles() == total_cycles);
    trace.validate(profile);
    return trace;
}

}  // namespace mesc
