#pragma once

#include <cstdint>

namespace geoatt::instr {

// Counters used to validate the cost model against the running code.
// Measurement needs exclusive access: reset, run the scoped operation,
// read. Not thread-safe on purpose.

namespace detail {
extern bool g_counting;
extern std::uint64_t g_multiplies;
extern std::uint64_t g_kernel_evals;
}  // namespace detail

// Scalar multiplies inside instrumented numeric paths (matmul inner loops,
// the sigma-dependent kernel scaling). Only ticked while counting is on.
inline void tick_multiply() {
    if (detail::g_counting) ++detail::g_multiplies;
}
inline bool counting() { return detail::g_counting; }
void set_counting(bool on);
void reset_multiplies();
std::uint64_t multiplies();

// Kernel matrix entry evaluations: one tick per G entry computed by a
// kernel build or rebuild. Always on; reading it is how tests verify the
// precompute-once contract for fixed kernels.
inline void tick_kernel_eval() { ++detail::g_kernel_evals; }
void reset_kernel_evals();
std::uint64_t kernel_evals();

}  // namespace geoatt::instr
