#pragma once

#include <cstdint>
#include <string>

#include "geoatt/expatt.hpp"

namespace geoatt {

// Exact counts, not asymptotics: mem_elems is the number of retained
// attention-map reals, flops uses 1 multiply-accumulate = 2 flops
// throughout.
struct CostReport {
    std::int64_t params = 0;
    std::int64_t mem_elems = 0;
    std::int64_t flops = 0;

    bool operator==(const CostReport&) const = default;
};

std::string cost_report_to_json(const CostReport& report);

struct LayerConfig {
    int h = 1;
    int w = 1;
    int c = 1;
    int n_heads = 1;
    int d = 1;    // key/query depth per head
    int d_v = 1;  // total value channels across heads
    bool learnable_kernel = true;

    int d_v_head() const { return d_v / n_heads; }
    void validate() const;  // throws on non-positive dims or d_v % n_heads != 0
};

// Key and query construction: params N*2Cd, mem N*(HW)^2 maps,
// flops 2*(N*2*HW*C*d + N*(HW)^2*d) for the projections plus K Q^T.
CostReport cost_kq(const LayerConfig& cfg);

// Relative positional encoding (formula only, nothing here implements it):
// params 2(H+W-1)d, mem HW*d, flops 2*(HW)^2.
CostReport cost_pos_encoding(const LayerConfig& cfg);

// Explicit attention-map construction: params 1 or 0, mem (HW)^2 shared
// across heads, flops 2*(HW)^2 for the learnable per-entry scaling and 0
// when fully fixed.
CostReport cost_expatt(const LayerConfig& cfg);

// Oracles: params by enumerating every learnable scalar, mem by counting
// retained map storage, flops by metering multiplies in an instrumented run.

// Full layer: all parameters, retained maps, one whole forward (including
// a fresh map rebuild for learnable kernels).
CostReport measure_counts(ExpAttLayer& layer, GridShape shape, Rng& rng);
CostReport measure_counts(const KqAttnLayer& layer, GridShape shape, Rng& rng);

// Scoped to what the closed forms above cover.
CostReport measure_expatt_map_construction(ExpAttLayer& layer);
CostReport measure_kq_map_construction(const KqAttnLayer& layer, GridShape shape, Rng& rng);

}  // namespace geoatt
