#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

// Basic vocabulary shared by every module.  Everything that counts time does
// so in integer accelerator cycles; there is no floating point anywhere in
// the timing paths so that analysis and simulation stay exactly reproducible.

namespace mesc {

using Cycles = std::int64_t;
using TaskId = std::int32_t;
using Priority = std::int32_t;  // smaller value = higher priority

enum class CritLevel { Lo, Hi };

inline const char* to_string(CritLevel l) {
    return l == CritLevel::Lo ? "LO" : "HI";
}

// Exact ceiling division for non-negative numerator, positive denominator.
// The response-time equations are extremely sensitive to rounding here, so
// this is kept as the single shared implementation.
constexpr Cycles ceil_div(Cycles a, Cycles b) {
    return (a + b - 1) / b;
}

// Internal-consistency failure.  These checks stay enabled in release builds:
// a violated scheduling invariant must abort the run loudly, never produce a
// quietly wrong statistic.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

namespace detail {
[[noreturn]] inline void check_failed(const char* expr, const char* file, int line,
                                      const std::string& msg) {
    std::ostringstream os;
    os << "invariant violated: " << expr << " at " << file << ":" << line;
    if (!msg.empty()) os << " (" << msg << ")";
    throw InvariantError(os.str());
}
}  // namespace detail

#define MESC_CHECK(expr)                                                        \
    do {                                                                        \
        if (!(expr)) ::mesc::detail::check_failed(#expr, __FILE__, __LINE__, ""); \
    } while (0)

#define MESC_CHECK_MSG(expr, msg)                                               \
    do {                                                                        \
        if (!(expr)) {                                                          \
            std::ostringstream os_;                                             \
            os_ << msg;                                                         \
            ::mesc::detail::check_failed(#expr, __FILE__, __LINE__, os_.str()); \
        }                                                                       \
    } while (0)

// Platform description: scratchpad geometry, scheduler cadence and the
// analysis-side overhead constants.  The overhead defaults are the worst case
// of the behavioural cost model (see accelerator.hpp) so that simulated
// switches can be asserted against them.
struct SystemParams {
    int total_banks = 8;
    Cycles bank_size = 32 * 1024;          // bytes per scratchpad bank
    Cycles remap_block_size = 4 * 1024;    // bytes of remapping storage
    Cycles accumulator_size = 64 * 1024;   // bytes, allocation unrestricted

    Cycles t_sr = 5000;        // scheduler check period (cycles)
    Cycles y_cpu_check = 100;  // cost of one scheduler check (Upsilon_Csr)
    Cycles y_cpu_switch = 400; // CPU-side context switch, one direction (Upsilon_C)
    Cycles y_acc_save = 28669;    // bound on accelerator context save (Upsilon_S)
    Cycles y_acc_restore = 28837; // bound on accelerator context restore (Upsilon_R)

    void validate() const {
        if (total_banks <= 0 || bank_size <= 0 || remap_block_size <= 0 ||
            accumulator_size <= 0)
            throw std::invalid_argument("SystemParams: geometry fields must be positive");
        if (t_sr <= 0) throw std::invalid_argument("SystemParams: t_sr must be positive");
        if (y_cpu_check < 0 || y_cpu_switch < 0 || y_acc_save < 0 || y_acc_restore < 0)
            throw std::invalid_argument("SystemParams: overhead constants must be non-negative");
    }
};

}  // namespace mesc
