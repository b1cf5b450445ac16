#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mesc/types.hpp"

// Instruction streams executed by accelerator-using tasks, plus the cost
// profile that prices individual instructions and context-switch steps.
// A trace is a straight-line program: the simulator only needs per-instruction
// durations, operand sizes and preemption-boundary marks, not real semantics.

namespace mesc {

enum class InstrKind {
    Config,   // fills one class slot of the config copy buffer
    Load,     // DRAM -> scratchpad, allocates/locks banks through the remapper
    Store,    // accumulator -> DRAM result write-back
    Preload,  // feeds the systolic array
    Compute,  // matmul / conv block
    Flush,    // drops scratchpad contents, ends the job
};

const char* to_string(InstrKind k);

enum class ConfigClass { LoadCfg, StoreCfg, ExecCfg, NormCfg };

const char* to_string(ConfigClass c);

struct Instruction {
    InstrKind kind = InstrKind::Compute;
    Cycles cycles = 0;            // > 0 always; == 2 for Config
    Cycles bytes = 0;             // Load/Store transfer size, else 0
    ConfigClass cfg = ConfigClass::ExecCfg;  // Config only
    bool operator_boundary = false;  // legal preemption point for limited mode
};

// Instruction pricing and context-switch step pricing.  Values are behavioural
// stand-ins with the right orders of magnitude for a 32x32 systolic array with
// a 64-byte DMA bus; they are pinned constants, not tunables, because the
// acceptance thresholds depend on them.
struct CostProfile {
    Cycles config_cycles = 2;       // each config instruction
    Cycles dma_setup = 100;         // fixed part of any DMA transfer
    Cycles dma_beat_bytes = 64;     // bus width; transfers are ceil(bytes/64) beats
    Cycles compute_min = 500;       // sampled Compute/Preload duration range
    Cycles compute_max = 10000;
    Cycles max_instr = 10000;       // upper bound any instruction must respect

    // Context-switch step pricing.
    Cycles cpu_switch_base = 6000;   // kernel + handler path around the data moves
    Cycles step_beat_cycles = 5;     // step-wise mvin/mvout, per 64-byte beat
    Cycles redispatch_per_instr = 10;
    int max_inflight_queue = 16;     // issue-queue depth bound for re-dispatch

    Cycles transfer_cycles(Cycles bytes) const {
        return dma_setup + ceil_div(bytes, dma_beat_bytes);
    }
    // One scratchpad bank moved through the step-wise path (interruptible,
    // beat-at-a-time, hence the slower per-beat rate than plain DMA).
    Cycles bank_move_cycles(Cycles bank_size) const {
        return dma_setup + ceil_div(bank_size, dma_beat_bytes) * step_beat_cycles;
    }
};

struct InstructionTrace {
    std::vector<Instruction> instrs;

    Cycles total_cycles() const;
    Cycles max_instr_cycles() const;  // 0 for an empty trace
    std::size_t size() const { return instrs.size(); }
    bool empty() const { return instrs.empty(); }

    // Throws InvariantError if any instruction is malformed (non-positive
    // duration, config not 2 cycles, duration above profile.max_instr, ...).
    void validate(const CostProfile& profile) const;
};

// Builds a synthetic trace with an exact total duration: config prologue,
// loads covering the scratchpad footprint, a sampled compute/preload body,
// result stores, and a final flush-free exact filler.  operator_boundary is
// set on ~10 evenly spaced instructions.  Throws std::invalid_argument when
// total_cycles cannot accommodate the mandatory instructions.
InstructionTrace make_trace(Cycles total_cycles, Cycles footprint_bytes,
                            std::mt19937_64& rng, const CostProfile& profile);

}  // namespace mesc
