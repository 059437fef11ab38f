#include "geoatt/expatt.hpp"

#include <cmath>
#include <stdexcept>

namespace geoatt {

namespace {

void check_input(const Tensor& x, GridShape shape, int c_in, const char* who) {
    if (x.rank() != 2 || x.rows() != shape.pixels() || x.cols() != c_in)
        throw std::invalid_argument(std::string(who) + ": input " + x.shape_str() +
                                    " does not match HW=" + std::to_string(shape.pixels()) +
                                    ", C=" + std::to_string(c_in));
    if (!x.all_finite()) throw std::invalid_argument(std::string(who) + ": non-finite input");
}

// Writes src into dst columns [col0, col0+src.cols()).
void place_columns(Tensor& dst, const Tensor& src, int col0) {
    for (int i = 0; i < src.rows(); ++i)
        for (int j = 0; j < src.cols(); ++j) dst.at(i, col0 + j) = src.at(i, j);
}

Tensor take_columns(const Tensor& src, int col0, int width) {
    Tensor out({src.rows(), width});
    for (int i = 0; i < src.rows(); ++i)
        for (int j = 0; j < width; ++j) out.at(i, j) = src.at(i, col0 + j);
    return out;
}

}  // namespace

ExpAttLayer::ExpAttLayer(int c_in, int d_v, int n_heads, GridShape shape, KernelSpec kernel,
                         int offset, bool share_across_heads, Rng& rng)
    : c_in_(c_in),
      d_v_(d_v),
      n_heads_(n_heads),
      shape_(shape),
      kernel_(kernel),
      offset_(offset),
      share_(share_across_heads) {
    if (c_in < 1 || d_v < 1 || n_heads < 1)
        throw std::invalid_argument("ExpAttLayer needs positive c_in, d_v, n_heads");
    if (d_v % n_heads != 0)
        throw std::invalid_argument("d_v=" + std::to_string(d_v) + " not divisible by n_heads=" +
                                    std::to_string(n_heads));
    if (offset != 0 && offset != 1) throw std::invalid_argument("offset must be 0 or 1");
    if (shape.h < 1 || shape.w < 1) throw std::invalid_argument("grid shape must be at least 1x1");
    kernel_.validate();
    w_v_ = init_uniform(c_in_, d_v_, rng);
    w_o_ = init_uniform(d_v_, d_v_, rng);
    if (learnable()) sigmas_.assign(share_ ? 1 : static_cast<std::size_t>(n_heads_), kernel_.sigma);
    numerators_ = kernel_numerators(shape_, kernel_.kind);
    ensure_attention();
}

void ExpAttLayer::set_w_v(Tensor w) {
    if (w.rank() != 2 || w.rows() != c_in_ || w.cols() != d_v_)
        throw std::invalid_argument("w_v must be " + std::to_string(c_in_) + "x" +
                                    std::to_string(d_v_));
    w_v_ = std::move(w);
}

void ExpAttLayer::set_w_o(Tensor w) {
    if (w.rank() != 2 || w.rows() != d_v_ || w.cols() != d_v_)
        throw std::invalid_argument("w_o must be " + std::to_string(d_v_) + "x" +
                                    std::to_string(d_v_));
    w_o_ = std::move(w);
}

void ExpAttLayer::set_sigmas(const std::vector<double>& sigmas) {
    if (!learnable()) throw std::invalid_argument("kernel has no sigma: " +
                                                  kernel_kind_name(kernel_.kind));
    if (sigmas.size() != sigmas_.size())
        throw std::invalid_argument("expected " + std::to_string(sigmas_.size()) + " sigmas, got " +
                                    std::to_string(sigmas.size()));
    for (double s : sigmas) kernel_.with_sigma(s);  // validates the floor
    sigmas_ = sigmas;
}

int ExpAttLayer::map_count() const {
    return (learnable() && !share_) ? n_heads_ : 1;
}

int ExpAttLayer::param_count() const {
    return c_in_ * d_v_ + d_v_ * d_v_ + static_cast<int>(sigmas_.size());
}

std::vector<double> ExpAttLayer::pack_params() const {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(param_count()));
    flat.insert(flat.end(), w_v_.values().begin(), w_v_.values().end());
    flat.insert(flat.end(), w_o_.values().begin(), w_o_.values().end());
    flat.insert(flat.end(), sigmas_.begin(), sigmas_.end());
    return flat;
}

void ExpAttLayer::unpack_params(std::span<const double> flat) {
    if (flat.size() != static_cast<std::size_t>(param_count()))
        throw std::invalid_argument("expected " + std::to_string(param_count()) +
                                    " parameters, got " + std::to_string(flat.size()));
    std::size_t pos = 0;
    for (double& v : w_v_.values()) v = flat[pos++];
    for (double& v : w_o_.values()) v = flat[pos++];
    if (!sigmas_.empty()) {
        std::vector<double> sig(flat.begin() + static_cast<std::ptrdiff_t>(pos), flat.end());
        set_sigmas(sig);
    }
}

const std::shared_ptr<const AttentionState>& ExpAttLayer::ensure_attention() {
    if (state_ && state_->sigmas == sigmas_) return state_;
    auto state = std::make_shared<AttentionState>();
    state->sigmas = sigmas_;
    const int maps = map_count();
    state->raws.reserve(static_cast<std::size_t>(maps));
    state->maps.reserve(static_cast<std::size_t>(maps));
    for (int m = 0; m < maps; ++m) {
        KernelSpec spec = learnable() ? kernel_.with_sigma(sigmas_[static_cast<std::size_t>(m)])
                                      : kernel_;
        RawKernel raw{shape_, apply_kernel_decay(numerators_, spec)};
        state->maps.push_back(normalize_with_offset(raw, offset_));
        state->raws.push_back(std::move(raw));
    }
    state_ = std::move(state);
    return state_;
}

std::pair<Tensor, ExpAttCache> expatt_forward(ExpAttLayer& layer, const Tensor& x, GridShape shape) {
    if (!(shape == layer.shape()))
        throw std::invalid_argument("expatt_forward: kernel built for " +
                                    std::to_string(layer.shape().h) + "x" +
                                    std::to_string(layer.shape().w) + ", input grid is " +
                                    std::to_string(shape.h) + "x" + std::to_string(shape.w));
    check_input(x, shape, layer.c_in(), "expatt_forward");
    auto state = layer.ensure_attention();

    Tensor v = matmul(x, layer.w_v());
    Tensor p;
    if (state->maps.size() == 1) {
        p = matmul(state->maps[0].a, v);
    } else {
        p = Tensor({v.rows(), v.cols()});
        const int width = layer.d_v_head();
        for (int h = 0; h < layer.n_heads(); ++h) {
            Tensor block = matmul(state->maps[static_cast<std::size_t>(h)].a,
                                  take_columns(v, h * width, width));
            place_columns(p, block, h * width);
        }
    }
    Tensor y = matmul(p, layer.w_o());
    ExpAttCache cache{x, std::move(v), std::move(p), state};
    return {std::move(y), std::move(cache)};
}

ExpAttGrads expatt_backward(const ExpAttLayer& layer, const ExpAttCache& cache, const Tensor& dy) {
    if (!cache.attention) throw std::invalid_argument("expatt_backward: cache has no attention state");
    if (cache.x.cols() != layer.c_in() || cache.v.cols() != layer.d_v())
        throw std::invalid_argument("expatt_backward: cache does not match layer");
    if (!dy.same_shape(cache.p))
        throw std::invalid_argument("expatt_backward: dy " + dy.shape_str() + " vs " +
                                    cache.p.shape_str());
    const AttentionState& att = *cache.attention;

    ExpAttGrads grads;
    grads.dw_o = matmul(transpose(cache.p), dy);
    Tensor dp = matmul(dy, transpose(layer.w_o()));

    Tensor dv;
    if (att.maps.size() == 1) {
        dv = matmul(transpose(att.maps[0].a), dp);
    } else {
        dv = Tensor({dp.rows(), dp.cols()});
        const int width = layer.d_v_head();
        for (int h = 0; h < layer.n_heads(); ++h) {
            Tensor block = matmul(transpose(att.maps[static_cast<std::size_t>(h)].a),
                                  take_columns(dp, h * width, width));
            place_columns(dv, block, h * width);
        }
    }
    grads.dw_v = matmul(transpose(cache.x), dv);
    grads.dx = matmul(dv, transpose(layer.w_v()));

    if (layer.learnable()) {
        grads.dsigma.resize(att.maps.size(), 0.0);
        const int width = (att.maps.size() == 1) ? layer.d_v() : layer.d_v_head();
        for (std::size_t m = 0; m < att.maps.size(); ++m) {
            const double sigma = att.sigmas[m];
            Tensor dg = kernel_sigma_grad(layer.shape(), layer.kernel().with_sigma(sigma));
            Tensor da = attention_sigma_grad(att.raws[m], dg, layer.offset());
            const int col0 = static_cast<int>(m) * width;
            // sum_ij (dP V^T)_ij * dA_ij, computed as sum_i dP_i . (dA V)_i
            Tensor v_block = (att.maps.size() == 1) ? cache.v : take_columns(cache.v, col0, width);
            Tensor dav = matmul(da, v_block);
            double acc = 0.0;
            for (int i = 0; i < dav.rows(); ++i)
                for (int c = 0; c < width; ++c) acc += dp.at(i, col0 + c) * dav.at(i, c);
            grads.dsigma[m] = acc;
        }
    }
    return grads;
}

KqAttnLayer::KqAttnLayer(int c_in, int n_heads, int d, int d_v_head, Rng& rng)
    : c_in_(c_in), n_heads_(n_heads), d_(d), d_v_head_(d_v_head) {
    if (c_in < 1 || n_heads < 1 || d < 1 || d_v_head < 1)
        throw std::invalid_argument("KqAttnLayer needs positive c_in, n_heads, d, d_v_head");
    for (int h = 0; h < n_heads_; ++h) {
        w_k_.push_back(init_uniform(c_in_, d_, rng));
        w_q_.push_back(init_uniform(c_in_, d_, rng));
        w_v_.push_back(init_uniform(c_in_, d_v_head_, rng));
    }
    w_o_ = init_uniform(out_width(), out_width(), rng);
}

int KqAttnLayer::param_count() const {
    return n_heads_ * (2 * c_in_ * d_ + c_in_ * d_v_head_) + out_width() * out_width();
}

int KqAttnLayer::key_query_param_count() const { return n_heads_ * 2 * c_in_ * d_; }

std::vector<double> KqAttnLayer::pack_params() const {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(param_count()));
    for (int h = 0; h < n_heads_; ++h) {
        const auto& k = w_k_[static_cast<std::size_t>(h)];
        const auto& q = w_q_[static_cast<std::size_t>(h)];
        const auto& v = w_v_[static_cast<std::size_t>(h)];
        flat.insert(flat.end(), k.values().begin(), k.values().end());
        flat.insert(flat.end(), q.values().begin(), q.values().end());
        flat.insert(flat.end(), v.values().begin(), v.values().end());
    }
    flat.insert(flat.end(), w_o_.values().begin(), w_o_.values().end());
    return flat;
}

void KqAttnLayer::unpack_params(std::span<const double> flat) {
    if (flat.size() != static_cast<std::size_t>(param_count()))
        throw std::invalid_argument("expected " + std::to_string(param_count()) +
                                    " parameters, got " + std::to_string(flat.size()));
    std::size_t pos = 0;
    for (int h = 0; h < n_heads_; ++h) {
        for (double& v : w_k_[static_cast<std::size_t>(h)].values()) v = flat[pos++];
        for (double& v : w_q_[static_cast<std::size_t>(h)].values()) v = flat[pos++];
        for (double& v : w_v_[static_cast<std::size_t>(h)].values()) v = flat[pos++];
    }
    for (double& v : w_o_.values()) v = flat[pos++];
}

std::vector<Tensor> kq_attention_maps(const KqAttnLayer& layer, const Tensor& x, GridShape shape,
                                      KqCache* cache) {
    check_input(x, shape, layer.c_in(), "kq_attention_maps");
    const int hw = shape.pixels();
    const double sqrt_d = std::sqrt(static_cast<double>(layer.d()));
    std::vector<Tensor> maps;
    maps.reserve(static_cast<std::size_t>(layer.n_heads()));
    for (int h = 0; h < layer.n_heads(); ++h) {
        Tensor k = matmul(x, layer.w_k(h));
        Tensor q = matmul(x, layer.w_q(h));
        Tensor logits = matmul(k, transpose(q));
        // Row softmax with max subtraction; the sqrt(d) scaling uses a
        // division so the metered multiplies stay projections + K Q^T.
        Tensor s({hw, hw});
        for (int i = 0; i < hw; ++i) {
            double row_max = -1e300;
            for (int j = 0; j < hw; ++j) {
                logits.at(i, j) /= sqrt_d;
                row_max = std::max(row_max, logits.at(i, j));
            }
            double denom = 0.0;
            for (int j = 0; j < hw; ++j) {
                s.at(i, j) = std::exp(logits.at(i, j) - row_max);
                denom += s.at(i, j);
            }
            for (int j = 0; j < hw; ++j) s.at(i, j) /= denom;
        }
        if (cache) {
            cache->k.push_back(std::move(k));
            cache->q.push_back(std::move(q));
        }
        maps.push_back(std::move(s));
    }
    return maps;
}

std::pair<Tensor, KqCache> kq_attention_forward(const KqAttnLayer& layer, const Tensor& x,
                                                GridShape shape) {
    KqCache cache;
    cache.x = x;
    cache.softmax = kq_attention_maps(layer, x, shape, &cache);
    const int hw = shape.pixels();
    Tensor concat({hw, layer.out_width()});
    for (int h = 0; h < layer.n_heads(); ++h) {
        Tensor v = matmul(x, layer.w_v(h));
        Tensor att = matmul(cache.softmax[static_cast<std::size_t>(h)], v);
        place_columns(concat, att, h * layer.d_v_head());
        cache.v.push_back(std::move(v));
    }
    Tensor y = matmul(concat, layer.w_o());
    cache.concat = std::move(concat);
    return {std::move(y), std::move(cache)};
}

KqGrads kq_attention_backward(const KqAttnLayer& layer, const KqCache& cache, const Tensor& dy) {
    if (cache.x.cols() != layer.c_in() ||
        static_cast<int>(cache.softmax.size()) != layer.n_heads())
        throw std::invalid_argument("kq_attention_backward: cache does not match layer");
    if (!dy.same_shape(cache.concat))
        throw std::invalid_argument("kq_attention_backward: dy " + dy.shape_str() + " vs " +
                                    cache.concat.shape_str());
    const int hw = cache.x.rows();
    const int dvh = layer.d_v_head();
    const double sqrt_d = std::sqrt(static_cast<double>(layer.d()));

    KqGrads grads;
    grads.dw_o = matmul(transpose(cache.concat), dy);
    Tensor dconcat = matmul(dy, transpose(layer.w_o()));
    grads.dx = Tensor({hw, layer.c_in()});
    Tensor x_t = transpose(cache.x);

    for (int h = 0; h < layer.n_heads(); ++h) {
        const auto hi = static_cast<std::size_t>(h);
        Tensor datt = take_columns(dconcat, h * dvh, dvh);
        const Tensor& s = cache.softmax[hi];

        Tensor ds = matmul(datt, transpose(cache.v[hi]));
        Tensor dv = matmul(transpose(s), datt);

        // softmax backward, rows independent
        Tensor dlogits({hw, hw});
        for (int i = 0; i < hw; ++i) {
            double dot = 0.0;
            for (int j = 0; j < hw; ++j) dot += ds.at(i, j) * s.at(i, j);
            for (int j = 0; j < hw; ++j)
                dlogits.at(i, j) = s.at(i, j) * (ds.at(i, j) - dot) / sqrt_d;
        }

        Tensor dk = matmul(dlogits, cache.q[hi]);
        Tensor dq = matmul(transpose(dlogits), cache.k[hi]);

        grads.dw_k.push_back(matmul(x_t, dk));
        grads.dw_q.push_back(matmul(x_t, dq));
        grads.dw_v.push_back(matmul(x_t, dv));

        Tensor dx_h = matmul(dk, transpose(layer.w_k(h)));
        Tensor dx_q = matmul(dq, transpose(layer.w_q(h)));
        Tensor dx_v = matmul(dv, transpose(layer.w_v(h)));
        for (std::size_t idx = 0; idx < grads.dx.size(); ++idx)
            grads.dx.data()[idx] += dx_h.data()[idx] + dx_q.data()[idx] + dx_v.data()[idx];
    }
    return grads;
}

std::vector<double> brute_force_pixel_attention(std::span<const double> a_row, const Tensor& v,
                                                const Tensor& w_o) {
    if (static_cast<int>(a_row.size()) != v.rows())
        throw std::invalid_argument("attention row length does not match value rows");
    double sum = 0.0;
    for (double w : a_row) sum += w;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("attention row sums to " + std::to_string(sum) + ", not 1");
    const int d_v = v.cols();
    std::vector<double> pooled(static_cast<std::size_t>(d_v), 0.0);
    for (int j = 0; j < v.rows(); ++j)
        for (int c = 0; c < d_v; ++c)
            pooled[static_cast<std::size_t>(c)] += a_row[static_cast<std::size_t>(j)] * v.at(j, c);
    std::vector<double> out(static_cast<std::size_t>(w_o.cols()), 0.0);
    for (int c = 0; c < w_o.cols(); ++c) {
        double acc = 0.0;
        for (int k = 0; k < d_v; ++k) acc += pooled[static_cast<std::size_t>(k)] * w_o.at(k, c);
        out[static_cast<std::size_t>(c)] = acc;
    }
    return out;
}

Tensor concat_interplay_forward(ExpAttLayer& expatt_layer, const KqAttnLayer& kq_layer,
                                const Tensor& x, GridShape shape) {
    if (expatt_layer.c_in() != kq_layer.c_in())
        throw std::invalid_argument("c_in mismatch: expatt " + std::to_string(expatt_layer.c_in()) +
                                    " vs kq " + std::to_string(kq_layer.c_in()));
    auto [ye, cache_e] = expatt_forward(expatt_layer, x, shape);
    auto [yk, cache_k] = kq_attention_forward(kq_layer, x, shape);
    Tensor out({ye.rows(), ye.cols() + yk.cols()});
    place_columns(out, ye, 0);
    place_columns(out, yk, ye.cols());
    return out;
}

}  // namespace geoatt
