#include "mesc/bank_alloc.hpp"

#include <algorithm>
#include <stdexcept>

namespace mesc {

int min_banks_static(Cycles footprint_bytes, const SystemParams& sys) {
    sys.validate();
    if (footprint_bytes < 0)
        throw std::invalid_argument("min_banks_static: negative footprint");
    Cycles banks = footprint_bytes > 0 ? ceil_div(footprint_bytes, sys.bank_size) : 1;
    banks = std::max<Cycles>(banks, 1);
    banks = std::min<Cycles>(banks, sys.total_banks);
    return static_cast<int>(banks);
}

int min_banks_profiled(const std::vector<ProfilePoint>& profile, double epsilon) {
    if (profile.empty())
        throw std::invalid_argument("min_banks_profiled: empty profile");
    if (epsilon < 0.0)
        throw std::invalid_argument("min_banks_profiled: negative epsilon");
    Cycles best = profile.front().exec_cycles;
    for (const auto& p : profile) {
        if (p.banks <= 0 || p.exec_cycles <= 0)
            throw std::invalid_argument("min_banks_profiled: malformed profile point");
        best = std::min(best, p.exec_cycles);
    }
    // Threshold kept in integer space: exec <= (1+eps)*best.
    double limit = (1.0 + epsilon) * double(best);
    int chosen = -1;
    for (const auto& p : profile) {
        if (double(p.exec_cycles) <= limit && (chosen == -1 || p.banks < chosen))
            chosen = p.banks;
    }
    MESC_CHECK(chosen >= 1);  // best itself always qualifies
    return chosen;
}

}  // namespace mesc
