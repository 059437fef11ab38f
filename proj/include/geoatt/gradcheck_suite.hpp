#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace geoatt {

struct GradCheckResult {
    std::string name;
    double max_rel_err = 0.0;
    double tolerance = 1e-6;
    bool pass = false;
};

enum class GradCheckPreset { Default, Quick };

struct GradCheckOptions {
    std::uint64_t seed = 0;
    GradCheckPreset preset = GradCheckPreset::Default;
    // Negative-control hook: scales one analytic sigma gradient so the
    // harness visibly fails.
    bool corrupt_sigma_grad = false;
};

// Every registered analytic-vs-central-difference check in the project:
// kernel and attention sigma gradients, both attention layers, conv,
// pooling and the augmented block, across offsets and head-sharing modes.
std::vector<GradCheckResult> run_gradcheck_suite(const GradCheckOptions& options);

bool all_passed(const std::vector<GradCheckResult>& results);
std::string gradcheck_results_to_json(const std::vector<GradCheckResult>& results,
                                      std::uint64_t seed);

}  // namespace geoatt
