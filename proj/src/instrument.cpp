#include "geoatt/instrument.hpp"

namespace geoatt::instr {

namespace detail {
bool g_counting = false;
std::uint64_t g_multiplies = 0;
std::uint64_t g_kernel_evals = 0;
}  // namespace detail

void set_counting(bool on) { detail::g_counting = on; }
void reset_multiplies() { detail::g_multiplies = 0; }
std::uint64_t multiplies() { return detail::g_multiplies; }

void reset_kernel_evals() { detail::g_kernel_evals = 0; }
std::uint64_t kernel_evals() { return detail::g_kernel_evals; }

}  // namespace geoatt::instr
