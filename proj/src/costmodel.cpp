#include "geoatt/costmodel.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "geoatt/instrument.hpp"

namespace geoatt {

std::string cost_report_to_json(const CostReport& report) {
    nlohmann::ordered_json doc;
    doc["params"] = report.params;
    doc["mem_elems"] = report.mem_elems;
    doc["flops"] = report.flops;
    return doc.dump();
}

void LayerConfig::validate() const {
    if (h < 1 || w < 1 || c < 1 || n_heads < 1 || d < 1 || d_v < 1)
        throw std::invalid_argument("layer config dimensions must be positive");
    if (d_v % n_heads != 0)
        throw std::invalid_argument("d_v=" + std::to_string(d_v) +
                                    " not divisible by n_heads=" + std::to_string(n_heads));
}

CostReport cost_kq(const LayerConfig& cfg) {
    cfg.validate();
    const std::int64_t hw = static_cast<std::int64_t>(cfg.h) * cfg.w;
    const std::int64_t n = cfg.n_heads, c = cfg.c, d = cfg.d;
    CostReport report;
    report.params = n * 2 * c * d;
    report.mem_elems = n * hw * hw;
    report.flops = 2 * (n * (2 * hw * c * d) + n * hw * hw * d);
    return report;
}

CostReport cost_pos_encoding(const LayerConfig& cfg) {
    cfg.validate();
    const std::int64_t hw = static_cast<std::int64_t>(cfg.h) * cfg.w;
    CostReport report;
    report.params = 2 * (static_cast<std::int64_t>(cfg.h) + cfg.w - 1) * cfg.d;
    report.mem_elems = hw * cfg.d;
    report.flops = 2 * hw * hw;
    return report;
}

CostReport cost_expatt(const LayerConfig& cfg) {
    cfg.validate();
    const std::int64_t hw = static_cast<std::int64_t>(cfg.h) * cfg.w;
    CostReport report;
    report.params = cfg.learnable_kernel ? 1 : 0;
    report.mem_elems = hw * hw;  // one map, shared across heads
    report.flops = cfg.learnable_kernel ? 2 * hw * hw : 0;
    return report;
}

namespace {

// Enumeration, not arithmetic: walk every scalar and count.
std::int64_t enumerate_scalars(const Tensor& t) {
    std::int64_t count = 0;
    for (double v : t.values()) {
        (void)v;
        ++count;
    }
    return count;
}

std::int64_t map_elements(const std::vector<AttentionMatrix>& maps) {
    std::int64_t count = 0;
    for (const auto& m : maps) count += static_cast<std::int64_t>(m.a.size());
    return count;
}

std::int64_t map_elements(const std::vector<Tensor>& maps) {
    std::int64_t count = 0;
    for (const auto& m : maps) count += static_cast<std::int64_t>(m.size());
    return count;
}

}  // namespace

CostReport measure_counts(ExpAttLayer& layer, GridShape shape, Rng& rng) {
    CostReport report;
    report.params = enumerate_scalars(layer.w_v()) + enumerate_scalars(layer.w_o()) +
                    static_cast<std::int64_t>(layer.sigmas().size());

    Tensor x = init_uniform(shape.pixels(), layer.c_in(), rng);
    layer.invalidate_attention();
    instr::reset_multiplies();
    instr::set_counting(true);
    auto [y, cache] = expatt_forward(layer, x, shape);
    instr::set_counting(false);
    report.flops = 2 * static_cast<std::int64_t>(instr::multiplies());
    report.mem_elems = map_elements(cache.attention->maps);
    return report;
}

CostReport measure_counts(const KqAttnLayer& layer, GridShape shape, Rng& rng) {
    CostReport report;
    report.params = 0;
    for (int h = 0; h < layer.n_heads(); ++h)
        report.params += enumerate_scalars(layer.w_k(h)) + enumerate_scalars(layer.w_q(h)) +
                         enumerate_scalars(layer.w_v(h));
    report.params += enumerate_scalars(layer.w_o());

    Tensor x = init_uniform(shape.pixels(), layer.c_in(), rng);
    instr::reset_multiplies();
    instr::set_counting(true);
    auto [y, cache] = kq_attention_forward(layer, x, shape);
    instr::set_counting(false);
    report.flops = 2 * static_cast<std::int64_t>(instr::multiplies());
    report.mem_elems = map_elements(cache.softmax);
    return report;
}

CostReport measure_expatt_map_construction(ExpAttLayer& layer) {
    CostReport report;
    report.params = static_cast<std::int64_t>(layer.sigmas().size());
    layer.invalidate_attention();
    instr::reset_multiplies();
    instr::set_counting(true);
    const auto& state = layer.ensure_attention();
    instr::set_counting(false);
    report.flops = 2 * static_cast<std::int64_t>(instr::multiplies());
    report.mem_elems = map_elements(state->maps);
    return report;
}

CostReport measure_kq_map_construction(const KqAttnLayer& layer, GridShape shape, Rng& rng) {
    CostReport report;
    report.params = 0;
    for (int h = 0; h < layer.n_heads(); ++h)
        report.params += enumerate_scalars(layer.w_k(h)) + enumerate_scalars(layer.w_q(h));

    Tensor x = init_uniform(shape.pixels(), layer.c_in(), rng);
    instr::reset_multiplies();
    instr::set_counting(true);
    std::vector<Tensor> maps = kq_attention_maps(layer, x, shape);
    instr::set_counting(false);
    report.flops = 2 * static_cast<std::int64_t>(instr::multiplies());
    report.mem_elems = map_elements(maps);
    return report;
}

}  // namespace geoatt
