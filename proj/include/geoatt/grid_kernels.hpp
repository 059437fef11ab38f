#pragma once

#include <string>

#include "geoatt/tensor.hpp"

namespace geoatt {

// Spatial extent of the attended feature map. Flat pixel index
// i = i_y * w + i_x, rows and columns 0-based.
struct GridShape {
    int h = 1;
    int w = 1;

    int pixels() const { return h * w; }
    bool operator==(const GridShape&) const = default;
};

struct PixelCoord {
    int x = 0;  // column
    int y = 0;  // row
    bool operator==(const PixelCoord&) const = default;
};

PixelCoord pixel_coords(GridShape shape, int flat_index);

enum class KernelKind { Constant, Linear, Cosine, Gaussian, ExpEuclid, ExpManhattan };

bool kernel_is_learnable(KernelKind kind);
std::string kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

inline constexpr double kSigmaFloor = 1e-3;

// Which decay function parameterizes G, plus its radius for the three
// learnable kinds. Fixed kinds ignore sigma entirely.
struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
    double sigma = 0.75;

    static KernelSpec fixed(KernelKind kind);
    static KernelSpec learnable(KernelKind kind, double sigma);
    KernelSpec with_sigma(double s) const;
    void validate() const;  // throws; sigma below the floor is never silently clamped here
};

// G with entries in (0, 1], G_ii = 1, symmetric, translation invariant.
struct RawKernel {
    GridShape shape;
    Tensor g;  // HW x HW
};

// Row-normalized (G + offset); every row sums to 1.
struct AttentionMatrix {
    GridShape shape;
    int offset = 1;  // recorded at build time; 1 is the standard mechanism,
                     // 0 exists for the no-global-offset ablation
    Tensor a;        // HW x HW
};

// The distance measure the kind's decay acts on (0 for Constant):
//   Linear/Cosine   sqrt(dx^2 + dy^2) / sqrt(H^2 + W^2)
//   Gaussian        (dx/W)^2 + (dy/H)^2
//   ExpEuclid       sqrt((dx/W)^2 + (dy/H)^2)
//   ExpManhattan    |dx|/W + |dy|/H
double kernel_distance(GridShape shape, KernelKind kind, int i, int j);

// HW x HW matrix of kernel_distance values; the sigma-independent part a
// layer precomputes once per shape.
Tensor kernel_numerators(GridShape shape, KernelKind kind);

// Applies the kind's decay to a precomputed numerator matrix. Ticks the
// kernel-eval counter per entry, and the multiply counter per entry for
// learnable kinds (the single sigma scaling multiply).
Tensor apply_kernel_decay(const Tensor& numerators, const KernelSpec& spec);

RawKernel build_raw_kernel(GridShape shape, const KernelSpec& spec);

// a[i][j] = (g[i][j] + offset) / sum_k (g[i][k] + offset), offset in {0, 1}.
AttentionMatrix normalize_with_offset(const RawKernel& raw, int offset);

// dG/dsigma for the learnable kinds:
//   Gaussian      g * r^2 / sigma^3
//   ExpEuclid     g * r / sigma^2
//   ExpManhattan  g * m / sigma^2
Tensor kernel_sigma_grad(GridShape shape, const KernelSpec& spec);

// dA/dsigma given dG/dsigma, with S_i = sum_k (g[i][k] + offset):
//   dA_ij = dG_ij / S_i - a_ij * (sum_k dG_ik) / S_i
Tensor attention_sigma_grad(const RawKernel& raw, const Tensor& dg, int offset);

}  // namespace geoatt
