#pragma once

#include <memory>
#include <vector>

#include "geoatt/grid_kernels.hpp"
#include "geoatt/rng.hpp"
#include "geoatt/tensor.hpp"

namespace geoatt {

// Attention maps built for a concrete radius assignment. Snapshotted by
// forward caches so a later sigma update cannot invalidate a pending
// backward pass.
struct AttentionState {
    std::vector<double> sigmas;          // values the maps were built from (empty for fixed kinds)
    std::vector<RawKernel> raws;         // 1 entry when shared, n_heads otherwise
    std::vector<AttentionMatrix> maps;
};

// One explicit-attention layer: y = Norm(G + offset) * (x W_v) * W_o.
// Heads share a single attention map unless share_across_heads is off,
// in which case each head owns a radius and a map applied to its block
// of value columns.
class ExpAttLayer {
public:
    ExpAttLayer(int c_in, int d_v, int n_heads, GridShape shape, KernelSpec kernel,
                int offset, bool share_across_heads, Rng& rng);

    int c_in() const { return c_in_; }
    int d_v() const { return d_v_; }
    int n_heads() const { return n_heads_; }
    int d_v_head() const { return d_v_ / n_heads_; }
    GridShape shape() const { return shape_; }
    int offset() const { return offset_; }
    bool share_across_heads() const { return share_; }
    const KernelSpec& kernel() const { return kernel_; }
    bool learnable() const { return kernel_is_learnable(kernel_.kind); }

    const Tensor& w_v() const { return w_v_; }
    const Tensor& w_o() const { return w_o_; }
    void set_w_v(Tensor w);
    void set_w_o(Tensor w);

    // One radius when shared, n_heads radii otherwise; empty for fixed kinds.
    const std::vector<double>& sigmas() const { return sigmas_; }
    void set_sigmas(const std::vector<double>& sigmas);  // validates >= sigma floor
    int map_count() const;

    int param_count() const;  // C*d_v + d_v^2 + number of radii
    std::vector<double> pack_params() const;
    void unpack_params(std::span<const double> flat);

    // Rebuilds the cached maps if the radii changed since the last build.
    // Fixed kinds build once at construction and never again.
    const std::shared_ptr<const AttentionState>& ensure_attention();
    const std::shared_ptr<const AttentionState>& attention_state() const { return state_; }
    void invalidate_attention() { state_.reset(); }

private:
    int c_in_;
    int d_v_;
    int n_heads_;
    GridShape shape_;
    KernelSpec kernel_;
    int offset_;
    bool share_;
    Tensor w_v_;  // C x d_v
    Tensor w_o_;  // d_v x d_v
    std::vector<double> sigmas_;
    Tensor numerators_;  // precomputed distance terms, sigma independent
    std::shared_ptr<const AttentionState> state_;
};

struct ExpAttCache {
    Tensor x;  // HW x C
    Tensor v;  // HW x d_v
    Tensor p;  // HW x d_v, attention-weighted values before W_o
    std::shared_ptr<const AttentionState> attention;
};

struct ExpAttGrads {
    Tensor dx;
    Tensor dw_v;
    Tensor dw_o;
    std::vector<double> dsigma;  // one per attention map; empty for fixed kinds
};

std::pair<Tensor, ExpAttCache> expatt_forward(ExpAttLayer& layer, const Tensor& x, GridShape shape);
ExpAttGrads expatt_backward(const ExpAttLayer& layer, const ExpAttCache& cache, const Tensor& dy);

// Key-query softmax baseline, per head: Softmax(K Q^T / sqrt(d)) V,
// heads concatenated and projected by W_o. No positional encoding term.
class KqAttnLayer {
public:
    KqAttnLayer(int c_in, int n_heads, int d, int d_v_head, Rng& rng);

    int c_in() const { return c_in_; }
    int n_heads() const { return n_heads_; }
    int d() const { return d_; }
    int d_v_head() const { return d_v_head_; }
    int out_width() const { return n_heads_ * d_v_head_; }

    const Tensor& w_k(int head) const { return w_k_[static_cast<std::size_t>(head)]; }
    const Tensor& w_q(int head) const { return w_q_[static_cast<std::size_t>(head)]; }
    const Tensor& w_v(int head) const { return w_v_[static_cast<std::size_t>(head)]; }
    const Tensor& w_o() const { return w_o_; }

    int param_count() const;            // N(2Cd + C d_v^h) + (N d_v^h)^2
    int key_query_param_count() const;  // N * 2Cd
    std::vector<double> pack_params() const;
    void unpack_params(std::span<const double> flat);

private:
    int c_in_;
    int n_heads_;
    int d_;
    int d_v_head_;
    std::vector<Tensor> w_k_, w_q_, w_v_;
    Tensor w_o_;
};

struct KqCache {
    Tensor x;
    std::vector<Tensor> k, q;     // per head, HW x d
    std::vector<Tensor> v;        // per head, HW x d_v_head
    std::vector<Tensor> softmax;  // per head, HW x HW
    Tensor concat;                // HW x (N d_v_head)
};

// The attention-map construction step alone: K/Q projections, K Q^T / sqrt(d),
// row softmax. Split out so the cost model can meter exactly this portion.
std::vector<Tensor> kq_attention_maps(const KqAttnLayer& layer, const Tensor& x, GridShape shape,
                                      KqCache* cache = nullptr);

std::pair<Tensor, KqCache> kq_attention_forward(const KqAttnLayer& layer, const Tensor& x,
                                                GridShape shape);

struct KqGrads {
    Tensor dx;
    std::vector<Tensor> dw_k, dw_q, dw_v;
    Tensor dw_o;
};

KqGrads kq_attention_backward(const KqAttnLayer& layer, const KqCache& cache, const Tensor& dy);

// Oracle: one output row recomputed with explicit loops and no shared
// matmul path. a_row must sum to 1 within 1e-9.
std::vector<double> brute_force_pixel_attention(std::span<const double> a_row, const Tensor& v,
                                                const Tensor& w_o);

// Column-wise concatenation of both mechanisms' outputs on the same input.
Tensor concat_interplay_forward(ExpAttLayer& expatt_layer, const KqAttnLayer& kq_layer,
                                const Tensor& x, GridShape shape);

}  // namespace geoatt
