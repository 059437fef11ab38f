#include "geoatt/netblocks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

namespace geoatt {

namespace {

int out_dim(int in, int stride) { return (in + stride - 1) / stride; }

void check_chw(const Tensor& x, int c, const char* who) {
    if (x.rank() != 3 || x.dim(0) != c)
        throw std::invalid_argument(std::string(who) + ": expected rank-3 input with " +
                                    std::to_string(c) + " channels, got " + x.shape_str());
}

}  // namespace

Conv2dLayer Conv2dLayer::create(int c_in, int c_out, int kernel_size, int stride, Rng& rng) {
    if (kernel_size != 1 && kernel_size != 3)
        throw std::invalid_argument("kernel_size must be 1 or 3");
    if (stride != 1 && stride != 2) throw std::invalid_argument("stride must be 1 or 2");
    if (c_in < 1 || c_out < 1) throw std::invalid_argument("channel counts must be positive");
    Conv2dLayer layer{c_in, c_out, kernel_size, stride, Tensor(), Tensor()};
    const int fan = kernel_size * kernel_size;
    Tensor flat = init_uniform(c_out, c_in * fan, rng);
    layer.weights = flat.reshaped({c_out, c_in, kernel_size, kernel_size});
    layer.bias = Tensor({c_out});
    return layer;
}

Tensor conv2d_forward(const Conv2dLayer& layer, const Tensor& x, ConvCache* cache) {
    check_chw(x, layer.c_in, "conv2d_forward");
    const int h = x.dim(1), w = x.dim(2);
    const int k = layer.kernel_size, s = layer.stride;
    const int pad = (k == 3) ? 1 : 0;
    const int oh = out_dim(h, s), ow = out_dim(w, s);
    Tensor y({layer.c_out, oh, ow});
    const double* wdata = layer.weights.data();
    for (int oc = 0; oc < layer.c_out; ++oc) {
        const double b = layer.bias.values()[static_cast<std::size_t>(oc)];
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                double acc = b;
                for (int ic = 0; ic < layer.c_in; ++ic) {
                    const std::size_t wbase =
                        ((static_cast<std::size_t>(oc) * layer.c_in + ic) * k) * k;
                    for (int ky = 0; ky < k; ++ky) {
                        const int iy = oy * s - pad + ky;
                        if (iy < 0 || iy >= h) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            const int ix = ox * s - pad + kx;
                            if (ix < 0 || ix >= w) continue;
                            acc += wdata[wbase + static_cast<std::size_t>(ky) * k + kx] *
                                   x.at(ic, iy, ix);
                        }
                    }
                }
                y.at(oc, oy, ox) = acc;
            }
        }
    }
    if (cache) cache->x = x;
    return y;
}

ConvGrads conv2d_backward(const Conv2dLayer& layer, const ConvCache& cache, const Tensor& dy) {
    const Tensor& x = cache.x;
    check_chw(x, layer.c_in, "conv2d_backward");
    const int h = x.dim(1), w = x.dim(2);
    const int k = layer.kernel_size, s = layer.stride;
    const int pad = (k == 3) ? 1 : 0;
    const int oh = out_dim(h, s), ow = out_dim(w, s);
    if (dy.rank() != 3 || dy.dim(0) != layer.c_out || dy.dim(1) != oh || dy.dim(2) != ow)
        throw std::invalid_argument("conv2d_backward: dy " + dy.shape_str() + " does not match");

    ConvGrads grads{Tensor({layer.c_in, h, w}),
                    Tensor({layer.c_out, layer.c_in, k, k}),
                    Tensor({layer.c_out})};
    const double* wdata = layer.weights.data();
    double* dwdata = grads.dweights.data();
    for (int oc = 0; oc < layer.c_out; ++oc) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                const double g = dy.at(oc, oy, ox);
                grads.dbias.values()[static_cast<std::size_t>(oc)] += g;
                for (int ic = 0; ic < layer.c_in; ++ic) {
                    const std::size_t wbase =
                        ((static_cast<std::size_t>(oc) * layer.c_in + ic) * k) * k;
                    for (int ky = 0; ky < k; ++ky) {
                        const int iy = oy * s - pad + ky;
                        if (iy < 0 || iy >= h) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            const int ix = ox * s - pad + kx;
                            if (ix < 0 || ix >= w) continue;
                            const std::size_t wi = wbase + static_cast<std::size_t>(ky) * k + kx;
                            dwdata[wi] += g * x.at(ic, iy, ix);
                            grads.dx.at(ic, iy, ix) += g * wdata[wi];
                        }
                    }
                }
            }
        }
    }
    return grads;
}

Tensor avgpool3x3s2(const Tensor& x) {
    if (x.rank() != 3) throw std::invalid_argument("avgpool3x3s2 expects rank-3 input");
    const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
    const int oh = out_dim(h, 2), ow = out_dim(w, 2);
    Tensor y({c, oh, ow});
    for (int ic = 0; ic < c; ++ic)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double acc = 0.0;
                for (int ky = 0; ky < 3; ++ky) {
                    const int iy = oy * 2 - 1 + ky;
                    if (iy < 0 || iy >= h) continue;
                    for (int kx = 0; kx < 3; ++kx) {
                        const int ix = ox * 2 - 1 + kx;
                        if (ix < 0 || ix >= w) continue;
                        acc += x.at(ic, iy, ix);
                    }
                }
                y.at(ic, oy, ox) = acc / 9.0;  // padding counted in the divisor
            }
    return y;
}

Tensor avgpool3x3s2_backward(const Tensor& dy, int in_h, int in_w) {
    if (dy.rank() != 3) throw std::invalid_argument("avgpool3x3s2_backward expects rank-3 dy");
    const int c = dy.dim(0), oh = dy.dim(1), ow = dy.dim(2);
    if (oh != out_dim(in_h, 2) || ow != out_dim(in_w, 2))
        throw std::invalid_argument("avgpool3x3s2_backward: dy " + dy.shape_str() +
                                    " does not match input " + std::to_string(in_h) + "x" +
                                    std::to_string(in_w));
    Tensor dx({c, in_h, in_w});
    for (int ic = 0; ic < c; ++ic)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                const double g = dy.at(ic, oy, ox) / 9.0;
                for (int ky = 0; ky < 3; ++ky) {
                    const int iy = oy * 2 - 1 + ky;
                    if (iy < 0 || iy >= in_h) continue;
                    for (int kx = 0; kx < 3; ++kx) {
                        const int ix = ox * 2 - 1 + kx;
                        if (ix < 0 || ix >= in_w) continue;
                        dx.at(ic, iy, ix) += g;
                    }
                }
            }
    return dx;
}

std::pair<int, int> split_channels(int c_out, double ratio, int n_heads) {
    if (n_heads < 1) throw std::invalid_argument("n_heads must be positive");
    if (c_out <= n_heads)
        throw std::invalid_argument("c_out=" + std::to_string(c_out) +
                                    " must exceed n_heads=" + std::to_string(n_heads));
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must be in (0, 1)");
    const double target = ratio * c_out;
    // nearest multiple of n_heads, ties upward
    int m = static_cast<int>(std::floor(target / n_heads + 0.5));
    m = std::max(m, 1);
    while (m * n_heads > c_out - 1) --m;  // keep at least one conv channel
    const int c_expatt = m * n_heads;
    return {c_out - c_expatt, c_expatt};
}

AugmentedConvBlock::AugmentedConvBlock(int c_in, int c_out, double ratio, int n_heads,
                                       GridShape in_shape, KernelSpec kernel, int offset,
                                       int stride, Rng& rng)
    : conv(), attn([&] {
          auto [c_conv, c_expatt] = split_channels(c_out, ratio, n_heads);
          conv = Conv2dLayer::create(c_in, c_conv, 3, stride, rng);
          return ExpAttLayer(c_in, c_expatt, n_heads, in_shape, kernel, offset, true, rng);
      }()),
      stride(stride) {}

namespace {

Tensor flatten_to_rows(const Tensor& x) {
    // {C, H, W} -> {HW, C}
    const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
    Tensor out({h * w, c});
    for (int ic = 0; ic < c; ++ic)
        for (int iy = 0; iy < h; ++iy)
            for (int ix = 0; ix < w; ++ix) out.at(iy * w + ix, ic) = x.at(ic, iy, ix);
    return out;
}

Tensor rows_to_chw(const Tensor& rows, int h, int w) {
    const int c = rows.cols();
    Tensor out({c, h, w});
    for (int ic = 0; ic < c; ++ic)
        for (int iy = 0; iy < h; ++iy)
            for (int ix = 0; ix < w; ++ix) out.at(ic, iy, ix) = rows.at(iy * w + ix, ic);
    return out;
}

}  // namespace

Tensor augmented_forward(AugmentedConvBlock& block, const Tensor& x, AugmentedCache* cache) {
    check_chw(x, block.conv.c_in, "augmented_forward");
    const GridShape in_shape{x.dim(1), x.dim(2)};
    if (!(in_shape == block.attn.shape()))
        throw std::invalid_argument("augmented_forward: input grid does not match block shape");

    AugmentedCache local;
    AugmentedCache& cc = cache ? *cache : local;
    cc.in_shape = in_shape;

    Tensor conv_out = conv2d_forward(block.conv, x, &cc.conv);
    auto [att_rows, att_cache] = expatt_forward(block.attn, flatten_to_rows(x), in_shape);
    cc.attn = std::move(att_cache);
    Tensor att = rows_to_chw(att_rows, in_shape.h, in_shape.w);
    if (block.stride == 2) {
        att = avgpool3x3s2(att);
        cc.pooled = true;
    }
    if (att.dim(1) != conv_out.dim(1) || att.dim(2) != conv_out.dim(2))
        throw std::runtime_error("augmented_forward: branch spatial dims diverge (" +
                                 att.shape_str() + " vs " + conv_out.shape_str() + ")");

    Tensor out({conv_out.dim(0) + att.dim(0), conv_out.dim(1), conv_out.dim(2)});
    std::memcpy(out.data(), conv_out.data(), conv_out.size() * sizeof(double));
    std::memcpy(out.data() + conv_out.size(), att.data(), att.size() * sizeof(double));
    return out;
}

AugmentedGrads augmented_backward(AugmentedConvBlock& block, const AugmentedCache& cache,
                                  const Tensor& dy) {
    const int c_conv = block.conv.c_out;
    const int c_att = block.attn.d_v();
    if (dy.rank() != 3 || dy.dim(0) != c_conv + c_att)
        throw std::invalid_argument("augmented_backward: dy " + dy.shape_str() +
                                    " does not match block output channels");
    const int oh = dy.dim(1), ow = dy.dim(2);

    Tensor dy_conv({c_conv, oh, ow});
    Tensor dy_att({c_att, oh, ow});
    std::memcpy(dy_conv.data(), dy.data(), dy_conv.size() * sizeof(double));
    std::memcpy(dy_att.data(), dy.data() + dy_conv.size(), dy_att.size() * sizeof(double));

    AugmentedGrads grads;
    grads.conv = conv2d_backward(block.conv, cache.conv, dy_conv);

    Tensor datt = cache.pooled ? avgpool3x3s2_backward(dy_att, cache.in_shape.h, cache.in_shape.w)
                               : std::move(dy_att);
    grads.attn = expatt_backward(block.attn, cache.attn, flatten_to_rows(datt));

    grads.dx = grads.conv.dx;
    Tensor dx_att = rows_to_chw(grads.attn.dx, cache.in_shape.h, cache.in_shape.w);
    for (std::size_t i = 0; i < grads.dx.size(); ++i) grads.dx.data()[i] += dx_att.data()[i];
    return grads;
}

std::vector<ToySample> make_toy_dataset(std::uint64_t seed, int n, double noise_std) {
    if (n < 1) throw std::invalid_argument("dataset size must be >= 1");
    constexpr int kSide = 16;
    constexpr double kCenter = (kSide - 1) / 2.0;  // 7.5
    constexpr double kBlobStd = 1.5;
    const double lo_r[3] = {0.0, ToyRegions::kMidLo, ToyRegions::kOuterLo};
    const double hi_r[3] = {ToyRegions::kInner, ToyRegions::kMidHi, ToyRegions::kOuterHi};

    Rng rng(seed);
    std::vector<ToySample> samples;
    samples.reserve(static_cast<std::size_t>(n));
    for (int idx = 0; idx < n; ++idx) {
        const int label = idx % 3;
        double cx = kCenter, cy = kCenter;
        for (;;) {
            cx = rng.uniform(kCenter - hi_r[label], kCenter + hi_r[label]);
            cy = rng.uniform(kCenter - hi_r[label], kCenter + hi_r[label]);
            const double r = std::sqrt((cx - kCenter) * (cx - kCenter) +
                                       (cy - kCenter) * (cy - kCenter));
            const bool in_band = r >= lo_r[label] && r <= hi_r[label];
            const bool in_frame = cx >= 0.5 && cx <= kSide - 1.5 && cy >= 0.5 && cy <= kSide - 1.5;
            if (in_band && in_frame) break;
        }
        Tensor img({1, kSide, kSide});
        for (int y = 0; y < kSide; ++y)
            for (int x = 0; x < kSide; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                double v = std::exp(-d2 / (2.0 * kBlobStd * kBlobStd));
                if (noise_std > 0.0) v += noise_std * rng.normal();
                img.at(0, y, x) = v;
            }
        samples.push_back(ToySample{std::move(img), label});
    }
    return samples;
}

namespace {

struct ToyNet {
    Conv2dLayer stem;
    AugmentedConvBlock block;
    Tensor w_head;  // 32 x 3
    Tensor b_head;  // 3

    explicit ToyNet(const ToyNetConfig& cfg, Rng& rng)
        : stem(Conv2dLayer::create(1, 16, 3, 1, rng)),
          block(16, 32, 0.1, 4, GridShape{16, 16},
                kernel_is_learnable(cfg.kernel)
                    ? KernelSpec::learnable(cfg.kernel, cfg.sigma_init)
                    : KernelSpec::fixed(cfg.kernel),
                cfg.offset, 2, rng),
          w_head(init_uniform(32, 3, rng)),
          b_head(Tensor({3})) {}
};

struct ToyCaches {
    ConvCache stem;
    AugmentedCache block;
    Tensor gap;     // 32
    double probs[3] = {0, 0, 0};
};

void toy_logits(ToyNet& net, const Tensor& img, ToyCaches* caches, double* logits) {
    ToyCaches local;
    ToyCaches& cc = caches ? *caches : local;
    Tensor s1 = conv2d_forward(net.stem, img, &cc.stem);
    Tensor a1 = augmented_forward(net.block, s1, &cc.block);
    const int ch = a1.dim(0);
    const double area = static_cast<double>(a1.dim(1) * a1.dim(2));
    cc.gap = Tensor({ch});
    for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int y = 0; y < a1.dim(1); ++y)
            for (int x = 0; x < a1.dim(2); ++x) acc += a1.at(c, y, x);
        cc.gap.values()[static_cast<std::size_t>(c)] = acc / area;
    }
    for (int k = 0; k < 3; ++k) {
        double acc = net.b_head.values()[static_cast<std::size_t>(k)];
        for (int c = 0; c < ch; ++c)
            acc += cc.gap.values()[static_cast<std::size_t>(c)] * net.w_head.at(c, k);
        logits[k] = acc;
    }
}

double softmax_ce(const double* logits, int label, double* probs) {
    const double m = std::max({logits[0], logits[1], logits[2]});
    double denom = 0.0;
    for (int k = 0; k < 3; ++k) denom += std::exp(logits[k] - m);
    for (int k = 0; k < 3; ++k) probs[k] = std::exp(logits[k] - m) / denom;
    return -(logits[label] - m - std::log(denom));
}

int argmax3(const double* v) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (v[k] > v[best]) best = k;
    return best;
}

struct Velocity {
    Tensor stem_w, stem_b, conv_w, conv_b, w_v, w_o, w_head, b_head;
    std::vector<double> sigma;
};

void fnv1a_bytes(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
}

std::string digest_params(const ToyNet& net) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto add = [&h](const Tensor& t) { fnv1a_bytes(h, t.data(), t.size() * sizeof(double)); };
    add(net.stem.weights);
    add(net.stem.bias);
    add(net.block.conv.weights);
    add(net.block.conv.bias);
    add(net.block.attn.w_v());
    add(net.block.attn.w_o());
    const auto& sig = net.block.attn.sigmas();
    fnv1a_bytes(h, sig.data(), sig.size() * sizeof(double));
    add(net.w_head);
    add(net.b_head);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace

TrainReport train_toy(const ToyNetConfig& config) {
    if (config.steps < 0 || config.batch_size < 1 || config.dataset_size < 1)
        throw std::invalid_argument("train_toy: bad config");
    const auto data = make_toy_dataset(config.seed, config.dataset_size);
    Rng init_rng(config.seed ^ 0x5DEECE66Dull);
    Rng batch_rng(config.seed ^ 0xDA3E39CB94B95BDBull);
    ToyNet net(config, init_rng);

    Velocity vel{Tensor(net.stem.weights.dims()), Tensor(net.stem.bias.dims()),
                 Tensor(net.block.conv.weights.dims()), Tensor(net.block.conv.bias.dims()),
                 Tensor(net.block.attn.w_v().dims()), Tensor(net.block.attn.w_o().dims()),
                 Tensor(net.w_head.dims()), Tensor(net.b_head.dims()),
                 std::vector<double>(net.block.attn.sigmas().size(), 0.0)};

    TrainReport report;
    report.config = config;
    const int n = config.dataset_size;
    const int steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;

    auto eval_accuracy = [&]() {
        int correct = 0;
        double logits[3];
        for (const auto& sample : data) {
            toy_logits(net, sample.image, nullptr, logits);
            if (argmax3(logits) == sample.label) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(n);
    };

    auto sgd_step = [&](Tensor& param, Tensor& velocity, const Tensor& grad) {
        for (std::size_t i = 0; i < param.size(); ++i) {
            velocity.data()[i] = config.momentum * velocity.data()[i] + grad.data()[i];
            param.data()[i] -= config.learning_rate * velocity.data()[i];
        }
    };

    for (int step = 0; step < config.steps; ++step) {
        Tensor g_stem_w(net.stem.weights.dims()), g_stem_b(net.stem.bias.dims());
        Tensor g_conv_w(net.block.conv.weights.dims()), g_conv_b(net.block.conv.bias.dims());
        Tensor g_w_v(net.block.attn.w_v().dims()), g_w_o(net.block.attn.w_o().dims());
        Tensor g_w_head(net.w_head.dims()), g_b_head(net.b_head.dims());
        std::vector<double> g_sigma(vel.sigma.size(), 0.0);
        double batch_loss = 0.0;
        const double inv_batch = 1.0 / config.batch_size;

        for (int b = 0; b < config.batch_size; ++b) {
            const auto& sample = data[static_cast<std::size_t>(batch_rng.next_index(n))];
            ToyCaches caches;
            double logits[3];
            toy_logits(net, sample.image, &caches, logits);
            batch_loss += softmax_ce(logits, sample.label, caches.probs) * inv_batch;

            double dlogits[3];
            for (int k = 0; k < 3; ++k)
                dlogits[k] = (caches.probs[k] - (k == sample.label ? 1.0 : 0.0)) * inv_batch;

            const int ch = net.w_head.rows();
            Tensor dgap({ch});
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                const double gap_c = caches.gap.values()[static_cast<std::size_t>(c)];
                for (int k = 0; k < 3; ++k) {
                    g_w_head.at(c, k) += gap_c * dlogits[k];
                    acc += dlogits[k] * net.w_head.at(c, k);
                }
                dgap.values()[static_cast<std::size_t>(c)] = acc;
            }
            for (int k = 0; k < 3; ++k) g_b_head.values()[static_cast<std::size_t>(k)] += dlogits[k];

            const int oh = 8, ow = 8;
            Tensor d_a1({ch, oh, ow});
            const double inv_area = 1.0 / (oh * ow);
            for (int c = 0; c < ch; ++c) {
                const double g = dgap.values()[static_cast<std::size_t>(c)] * inv_area;
                for (int y = 0; y < oh; ++y)
                    for (int x = 0; x < ow; ++x) d_a1.at(c, y, x) = g;
            }

            AugmentedGrads bg = augmented_backward(net.block, caches.block, d_a1);
            ConvGrads sg = conv2d_backward(net.stem, caches.stem, bg.dx);

            for (std::size_t i = 0; i < g_stem_w.size(); ++i)
                g_stem_w.data()[i] += sg.dweights.data()[i];
            for (std::size_t i = 0; i < g_stem_b.size(); ++i)
                g_stem_b.data()[i] += sg.dbias.data()[i];
            for (std::size_t i = 0; i < g_conv_w.size(); ++i)
                g_conv_w.data()[i] += bg.conv.dweights.data()[i];
            for (std::size_t i = 0; i < g_conv_b.size(); ++i)
                g_conv_b.data()[i] += bg.conv.dbias.data()[i];
            for (std::size_t i = 0; i < g_w_v.size(); ++i)
                g_w_v.data()[i] += bg.attn.dw_v.data()[i];
            for (std::size_t i = 0; i < g_w_o.size(); ++i)
                g_w_o.data()[i] += bg.attn.dw_o.data()[i];
            for (std::size_t i = 0; i < g_sigma.size(); ++i) g_sigma[i] += bg.attn.dsigma[i];
        }

        if (!std::isfinite(batch_loss)) throw TrainDiverged(step);
        report.loss.push_back(batch_loss);

        sgd_step(net.stem.weights, vel.stem_w, g_stem_w);
        sgd_step(net.stem.bias, vel.stem_b, g_stem_b);
        sgd_step(net.block.conv.weights, vel.conv_w, g_conv_w);
        sgd_step(net.block.conv.bias, vel.conv_b, g_conv_b);
        Tensor wv = net.block.attn.w_v();
        sgd_step(wv, vel.w_v, g_w_v);
        net.block.attn.set_w_v(std::move(wv));
        Tensor wo = net.block.attn.w_o();
        sgd_step(wo, vel.w_o, g_w_o);
        net.block.attn.set_w_o(std::move(wo));
        sgd_step(net.w_head, vel.w_head, g_w_head);
        sgd_step(net.b_head, vel.b_head, g_b_head);
        if (!g_sigma.empty()) {
            std::vector<double> sig = net.block.attn.sigmas();
            for (std::size_t i = 0; i < sig.size(); ++i) {
                vel.sigma[i] = config.momentum * vel.sigma[i] + g_sigma[i];
                sig[i] = std::max(sig[i] - config.learning_rate * vel.sigma[i], kSigmaFloor);
            }
            net.block.attn.set_sigmas(sig);
            report.sigma.push_back(sig[0]);
        } else {
            report.sigma.push_back(0.0);
        }

        if ((step + 1) % steps_per_epoch == 0) report.accuracy.push_back(eval_accuracy());
    }
    if (config.steps % steps_per_epoch != 0 || config.steps == 0)
        report.accuracy.push_back(eval_accuracy());
    report.param_digest = digest_params(net);
    return report;
}

std::string train_report_to_json(const TrainReport& report) {
    nlohmann::ordered_json doc;
    doc["loss"] = report.loss;
    doc["accuracy"] = report.accuracy;
    doc["sigma"] = report.sigma;
    doc["config"] = {
        {"seed", report.config.seed},
        {"steps", report.config.steps},
        {"learning_rate", report.config.learning_rate},
        {"momentum", report.config.momentum},
        {"batch_size", report.config.batch_size},
        {"dataset_size", report.config.dataset_size},
        {"sigma_init", report.config.sigma_init},
        {"kernel", kernel_kind_name(report.config.kernel)},
        {"offset", report.config.offset},
    };
    doc["param_digest"] = report.param_digest;
    return doc.dump(2) + "\n";
}

}  // namespace geoatt
