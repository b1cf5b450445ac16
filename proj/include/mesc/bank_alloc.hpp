#pragma once

#include <vector>

#include "mesc/types.hpp"

// Choosing a task's scratchpad bank reservation (eta).  The static rule
// covers synthetic workloads; the profiled rule picks the smallest bank count
// whose measured execution time is within a tolerance of the best, for
// workloads where extra banks stop paying off early.

namespace mesc {

struct ProfilePoint {
    int banks = 0;
    Cycles exec_cycles = 0;
};

// ceil(footprint / bank_size), clamped to [1, total_banks].  Even an empty
// footprint reserves one bank: an accelerator task always owns somewhere to
// stage data.
int min_banks_static(Cycles footprint_bytes, const SystemParams& sys);

// Smallest bank count with exec_cycles <= (1 + epsilon) * best over the
// profile.  Throws std::invalid_argument on an empty profile, non-positive
// bank counts, or epsilon < 0.
int min_banks_profiled(const std::vector<ProfilePoint>& profile, double epsilon);

}  // namespace mesc
