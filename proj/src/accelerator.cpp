#include "mesc/accelerator.hpp"

#include <algorithm>

namespace mesc {

AcceleratorState::AcceleratorState(const SystemParams& sys, const CostProfile& profile,
                                   bool bank_model)
    : sys_(sys), profile_(profile), bank_model_(bank_model) {
    sys_.validate();
    banks_.resize(static_cast<std::size_t>(sys_.total_banks));
}

void AcceleratorState::record_config(ConfigClass cls) {
    cfg_slots_[static_cast<std::size_t>(cls)] = true;  // overwrite is free
}

int AcceleratorState::configs_recorded() const {
    int n = 0;
    for (bool b : cfg_slots_) n += b ? 1 : 0;
    return n;
}

Cycles AcceleratorState::remap_entry_capacity() const {
    return sys_.remap_block_size / kRemapEntryBytes;
}

int AcceleratorState::count_new_banks_needed(TaskId task, Cycles bytes) const {
    // Appending fills the task's last partially-used bank first.
    Cycles spare = 0;
    for (const auto& b : banks_)
        if (b.owner == task) spare += sys_.bank_size - b.bytes;
    Cycles overflow = bytes - spare;
    return overflow > 0 ? static_cast<int>(ceil_div(overflow, sys_.bank_size)) : 0;
}

void AcceleratorState::remap_write(TaskId task, Cycles bytes, int banks_limit) {
    if (bytes <= 0) return;
    int new_banks = count_new_banks_needed(task, bytes);
    int held = locked_banks_of(task);
    if (held + new_banks > banks_limit)
        throw AllocationError("remap_write: bank reservation exceeded");
    if (new_banks > free_banks())
        throw AllocationError("remap_write: scratchpad banks exhausted");
    // One table entry per bank this write touches.  Without the remapper the
    // table does not exist, so only bank occupancy is tracked.
    int touched = new_banks + ((bytes > 0 && held > 0) ? 1 : 0);
    if (bank_model_ && remap_entries_ + touched > remap_entry_capacity())
        throw AllocationError("remap_write: remapping block full");
    if (!bank_model_) touched = 0;

    Cycles left = bytes;
    // Top up the existing partial bank.
    for (auto& b : banks_) {
        if (left == 0) break;
        if (b.owner == task && b.bytes < sys_.bank_size) {
            Cycles add = std::min(left, sys_.bank_size - b.bytes);
            b.bytes += add;
            left -= add;
        }
    }
    for (auto& b : banks_) {
        if (left == 0) break;
        if (b.owner == -1) {
            b.owner = task;
            b.bytes = std::min(left, sys_.bank_size);
            left -= b.bytes;
        }
    }
    MESC_CHECK_MSG(left == 0, "remap_write: feasibility check missed a case");
    remap_entries_ += touched;
    entries_of_[task] += touched;
}

ResidencyInfo AcceleratorState::remap_lookup(TaskId task) const {
    ResidencyInfo info;
    for (const auto& b : banks_) {
        if (b.owner == task) {
            info.banks += 1;
            info.bytes += b.bytes;
        }
    }
    if (info.banks == 0) throw MappingError("remap_lookup: task has no mapping");
    return info;
}

bool AcceleratorState::resident(TaskId task) const {
    return locked_banks_of(task) > 0;
}

int AcceleratorState::locked_banks_total() const {
    int n = 0;
    for (const auto& b : banks_) n += (b.owner != -1) ? 1 : 0;
    return n;
}

int AcceleratorState::locked_banks_of(TaskId task) const {
    int n = 0;
    for (const auto& b : banks_) n += (b.owner == task) ? 1 : 0;
    return n;
}

int AcceleratorState::free_banks() const {
    return sys_.total_banks - locked_banks_total();
}

int AcceleratorState::remap_entries_used() const { return remap_entries_; }

std::vector<TaskId> AcceleratorState::resident_tasks() const {
    std::vector<TaskId> out;
    for (const auto& b : banks_)
        if (b.owner != -1 &&
            std::find(out.begin(), out.end(), b.owner) == out.end())
            out.push_back(b.owner);
    std::sort(out.begin(), out.end());
    return out;
}

void AcceleratorState::release_banks(TaskId task) {
    for (auto& b : banks_) {
        if (b.owner == task) {
            b.owner = -1;
            b.bytes = 0;
        }
    }
    auto it = entries_of_.find(task);
    if (it != entries_of_.end()) {
        remap_entries_ -= it->second;
        entries_of_.erase(it);
    }
    MESC_CHECK(remap_entries_ >= 0);
}

void AcceleratorState::set_in_flight(Cycles total, Cycles done) {
    MESC_CHECK(total >= 0 && done >= 0 && done <= total);
    inflight_total_ = total;
    inflight_done_ = done;
}

void AcceleratorState::clear_in_flight() {
    inflight_total_ = 0;
    inflight_done_ = 0;
}

Cycles AcceleratorState::freeze_and_drain() {
    frozen_ = true;
    return inflight_total_ - inflight_done_;
}

void AcceleratorState::unfreeze() { frozen_ = false; }

void AcceleratorState::set_queue_depth(int queued) {
    MESC_CHECK(queued >= 0 && queued <= profile_.max_inflight_queue);
    queued_ = queued;
}

Cycles AcceleratorState::save_fixed_cost() const {
    // Accumulator step-wise move-out + config buffer move-out + (with the
    // remapper present) remapping table move-out, on top of the kernel path.
    Cycles c = profile_.cpu_switch_base;
    c += profile_.transfer_cycles(sys_.accumulator_size);
    c += profile_.transfer_cycles(kConfigBufferBytes);
    if (bank_model_) c += profile_.transfer_cycles(sys_.remap_block_size);
    return c;
}

Cycles AcceleratorState::restore_fixed_cost(const SavedContext& ctx) const {
    Cycles c = profile_.cpu_switch_base;
    c += profile_.transfer_cycles(sys_.accumulator_size);
    c += profile_.transfer_cycles(kConfigBufferBytes);
    c += profile_.config_cycles * ctx.cfg_count;  // replay saved configs
    if (bank_model_) c += profile_.transfer_cycles(sys_.remap_block_size);
    c += profile_.redispatch_per_instr * ctx.queued;
    return c;
}

SaveCost AcceleratorState::save_cost(TaskId current, const Task* next,
                                     bool force_evict) const {
    SaveCost sc;
    int held = locked_banks_of(current);
    if (!bank_model_) {
        // No remapper: resident data cannot be attributed across a switch, so
        // every switch moves the outgoing task's data out wholesale.
        sc.evict = held > 0;
    } else if (force_evict) {
        sc.evict = held > 0;
    } else if (next != nullptr && next->uses_accelerator()) {
        int need = next->banks - locked_banks_of(next->id);
        if (need < 0) need = 0;
        // Keeping current's banks is only legal when next still fits.
        sc.evict = need + locked_banks_total() > sys_.total_banks;
    } else {
        sc.evict = false;  // CPU successor (or none): keep everything resident
    }
    sc.evicted_banks = sc.evict ? held : 0;
    sc.cycles = save_fixed_cost() +
                profile_.bank_move_cycles(sys_.bank_size) * sc.evicted_banks;
    return sc;
}

SavedContext AcceleratorState::commit_save(TaskId current, const SaveCost& sc,
                                           int cfg_count, int queued) {
    SavedContext ctx;
    ctx.cfg_count = cfg_count;
    ctx.queued = queued;
    if (sc.evict) {
        ctx.banks_to_reload = locked_banks_of(current);
        try {
            ctx.bytes_to_reload = remap_lookup(current).bytes;
        } catch (const MappingError&) {
            ctx.bytes_to_reload = 0;
        }
        release_banks(current);
    }
    clear_in_flight();
    frozen_ = false;
    queued_ = 0;
    return ctx;
}

Cycles AcceleratorState::evict_cost(TaskId victim) const {
    return profile_.bank_move_cycles(sys_.bank_size) * locked_banks_of(victim);
}

int AcceleratorState::commit_evict(TaskId victim) {
    int n = locked_banks_of(victim);
    release_banks(victim);
    return n;
}

Cycles AcceleratorState::restore_cost(const SavedContext& ctx) const {
    return restore_fixed_cost(ctx) +
           profile_.bank_move_cycles(sys_.bank_size) * ctx.banks_to_reload;
}

void AcceleratorState::commit_restore(TaskId task, const SavedContext& ctx,
                                      int banks_limit) {
    if (ctx.banks_to_reload > 0)
        remap_write(task, ctx.bytes_to_reload, banks_limit);
    queued_ = ctx.queued;
}

Cycles AcceleratorState::worst_case_save_cost() const {
    // Every bank evicted in one switch.
    Cycles c = profile_.cpu_switch_base;
    c += profile_.transfer_cycles(sys_.accumulator_size);
    c += profile_.transfer_cycles(kConfigBufferBytes);
    c += profile_.transfer_cycles(sys_.remap_block_size);
    c += profile_.bank_move_cycles(sys_.bank_size) * sys_.total_banks;
    return c;
}

Cycles AcceleratorState::worst_case_restore_cost() const {
    SavedContext worst;
    worst.banks_to_reload = sys_.total_banks;
    worst.cfg_count = 4;
    worst.queued = profile_.max_inflight_queue;
    Cycles c = profile_.cpu_switch_base;
    c += profile_.transfer_cycles(sys_.accumulator_size);
    c += profile_.transfer_cycles(kConfigBufferBytes);
    c += profile_.config_cycles * worst.cfg_count;
    c += profile_.transfer_cycles(sys_.remap_block_size);
    c += profile_.redispatch_per_instr * worst.queued;
    c += profile_.bank_move_cycles(sys_.bank_size) * worst.banks_to_reload;
    return c;
}

}  // namespace mesc
