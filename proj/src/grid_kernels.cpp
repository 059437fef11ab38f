#include "geoatt/grid_kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geoatt/instrument.hpp"

namespace geoatt {

bool kernel_is_learnable(KernelKind kind) {
    return kind == KernelKind::Gaussian || kind == KernelKind::ExpEuclid ||
           kind == KernelKind::ExpManhattan;
}

std::string kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Constant: return "constant";
        case KernelKind::Linear: return "linear";
        case KernelKind::Cosine: return "cosine";
        case KernelKind::Gaussian: return "gaussian";
        case KernelKind::ExpEuclid: return "exp-euclid";
        case KernelKind::ExpManhattan: return "exp-manhattan";
    }
    throw std::invalid_argument("unknown kernel kind");
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "constant") return KernelKind::Constant;
    if (name == "linear") return KernelKind::Linear;
    if (name == "cosine") return KernelKind::Cosine;
    if (name == "gaussian") return KernelKind::Gaussian;
    if (name == "exp-euclid") return KernelKind::ExpEuclid;
    if (name == "exp-manhattan") return KernelKind::ExpManhattan;
    throw std::invalid_argument("unknown kernel kind: " + name);
}

KernelSpec KernelSpec::fixed(KernelKind kind) {
    if (kernel_is_learnable(kind))
        throw std::invalid_argument(kernel_kind_name(kind) + " takes a radius; use learnable()");
    return KernelSpec{kind, 0.0};
}

KernelSpec KernelSpec::learnable(KernelKind kind, double sigma) {
    if (!kernel_is_learnable(kind))
        throw std::invalid_argument(kernel_kind_name(kind) + " has no radius; use fixed()");
    KernelSpec spec{kind, sigma};
    spec.validate();
    return spec;
}

KernelSpec KernelSpec::with_sigma(double s) const {
    KernelSpec spec{kind, s};
    spec.validate();
    return spec;
}

void KernelSpec::validate() const {
    if (kernel_is_learnable(kind)) {
        if (!(sigma >= kSigmaFloor))
            throw std::invalid_argument("sigma " + std::to_string(sigma) + " below floor " +
                                        std::to_string(kSigmaFloor) + " for " +
                                        kernel_kind_name(kind));
    }
}

PixelCoord pixel_coords(GridShape shape, int flat_index) {
    if (flat_index < 0 || flat_index >= shape.pixels())
        throw std::out_of_range("pixel index " + std::to_string(flat_index) +
                                " outside grid of " + std::to_string(shape.pixels()) + " pixels");
    return PixelCoord{flat_index % shape.w, flat_index / shape.w};
}

double kernel_distance(GridShape shape, KernelKind kind, int i, int j) {
    const PixelCoord pi = pixel_coords(shape, i);
    const PixelCoord pj = pixel_coords(shape, j);
    const double dx = static_cast<double>(pi.x - pj.x);
    const double dy = static_cast<double>(pi.y - pj.y);
    const double w = static_cast<double>(shape.w);
    const double h = static_cast<double>(shape.h);
    switch (kind) {
        case KernelKind::Constant:
            return 0.0;
        case KernelKind::Linear:
        case KernelKind::Cosine:
            return std::sqrt(dx * dx + dy * dy) / std::sqrt(h * h + w * w);
        case KernelKind::Gaussian: {
            const double nx = dx / w, ny = dy / h;
            return nx * nx + ny * ny;
        }
        case KernelKind::ExpEuclid: {
            const double nx = dx / w, ny = dy / h;
            return std::sqrt(nx * nx + ny * ny);
        }
        case KernelKind::ExpManhattan:
            return std::abs(dx) / w + std::abs(dy) / h;
    }
    throw std::invalid_argument("unknown kernel kind");
}

Tensor kernel_numerators(GridShape shape, KernelKind kind) {
    const int hw = shape.pixels();
    Tensor num({hw, hw});
    for (int i = 0; i < hw; ++i)
        for (int j = 0; j < hw; ++j) num.at(i, j) = kernel_distance(shape, kind, i, j);
    return num;
}

Tensor apply_kernel_decay(const Tensor& numerators, const KernelSpec& spec) {
    spec.validate();
    const int hw = numerators.rows();
    Tensor g({hw, hw});
    const double* src = numerators.data();
    double* dst = g.data();
    const std::size_t n = numerators.size();
    switch (spec.kind) {
        case KernelKind::Constant:
            for (std::size_t k = 0; k < n; ++k) {
                instr::tick_kernel_eval();
                dst[k] = 1.0;
            }
            break;
        case KernelKind::Linear:
            for (std::size_t k = 0; k < n; ++k) {
                instr::tick_kernel_eval();
                dst[k] = 1.0 - src[k];
            }
            break;
        case KernelKind::Cosine:
            for (std::size_t k = 0; k < n; ++k) {
                instr::tick_kernel_eval();
                dst[k] = 0.5 * (1.0 + std::cos(std::numbers::pi * src[k]));
            }
            break;
        case KernelKind::Gaussian: {
            const double scale = 1.0 / (2.0 * spec.sigma * spec.sigma);
            for (std::size_t k = 0; k < n; ++k) {
                instr::tick_kernel_eval();
                instr::tick_multiply();  // the one sigma-dependent scaling per entry
                dst[k] = std::exp(-(src[k] * scale));
            }
            break;
        }
        case KernelKind::ExpEuclid:
        case KernelKind::ExpManhattan: {
            const double scale = 1.0 / spec.sigma;
            for (std::size_t k = 0; k < n; ++k) {
                instr::tick_kernel_eval();
                instr::tick_multiply();
                dst[k] = std::exp(-(src[k] * scale));
            }
            break;
        }
    }
    return g;
}

RawKernel build_raw_kernel(GridShape shape, const KernelSpec& spec) {
    if (shape.h < 1 || shape.w < 1) throw std::invalid_argument("grid shape must be at least 1x1");
    return RawKernel{shape, apply_kernel_decay(kernel_numerators(shape, spec.kind), spec)};
}

AttentionMatrix normalize_with_offset(const RawKernel& raw, int offset) {
    if (offset != 0 && offset != 1)
        throw std::invalid_argument("offset must be 0 or 1, got " + std::to_string(offset));
    const int hw = raw.g.rows();
    Tensor a({hw, hw});
    const double off = static_cast<double>(offset);
    for (int i = 0; i < hw; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < hw; ++j) row_sum += raw.g.at(i, j) + off;
        for (int j = 0; j < hw; ++j) a.at(i, j) = (raw.g.at(i, j) + off) / row_sum;
    }
    return AttentionMatrix{raw.shape, offset, std::move(a)};
}

Tensor kernel_sigma_grad(GridShape shape, const KernelSpec& spec) {
    spec.validate();
    if (!kernel_is_learnable(spec.kind))
        throw std::invalid_argument("kernel has no sigma: " + kernel_kind_name(spec.kind));
    const int hw = shape.pixels();
    const Tensor num = kernel_numerators(shape, spec.kind);
    Tensor dg({hw, hw});
    const double sigma = spec.sigma;
    if (spec.kind == KernelKind::Gaussian) {
        const double scale = 1.0 / (2.0 * sigma * sigma);
        const double s3 = sigma * sigma * sigma;
        for (std::size_t k = 0; k < num.size(); ++k) {
            const double r2 = num.data()[k];
            dg.data()[k] = std::exp(-(r2 * scale)) * r2 / s3;
        }
    } else {
        const double scale = 1.0 / sigma;
        const double s2 = sigma * sigma;
        for (std::size_t k = 0; k < num.size(); ++k) {
            const double r = num.data()[k];
            dg.data()[k] = std::exp(-(r * scale)) * r / s2;
        }
    }
    return dg;
}

Tensor attention_sigma_grad(const RawKernel& raw, const Tensor& dg, int offset) {
    if (!raw.g.same_shape(dg))
        throw std::invalid_argument("dG shape " + dg.shape_str() + " does not match kernel " +
                                    raw.g.shape_str());
    if (offset != 0 && offset != 1)
        throw std::invalid_argument("offset must be 0 or 1, got " + std::to_string(offset));
    const int hw = raw.g.rows();
    const double off = static_cast<double>(offset);
    Tensor da({hw, hw});
    for (int i = 0; i < hw; ++i) {
        double s = 0.0, ds = 0.0;
        for (int j = 0; j < hw; ++j) {
            s += raw.g.at(i, j) + off;
            ds += dg.at(i, j);
        }
        for (int j = 0; j < hw; ++j) {
            const double a_ij = (raw.g.at(i, j) + off) / s;
            da.at(i, j) = dg.at(i, j) / s - a_ij * ds / s;
        }
    }
    return da;
}

}  // namespace geoatt
