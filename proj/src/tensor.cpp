#include "geoatt/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "geoatt/instrument.hpp"
#include "geoatt/rng.hpp"

namespace geoatt {

namespace {

std::size_t checked_volume(const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("tensor needs at least one dimension");
    std::size_t n = 1;
    for (int d : dims) {
        if (d <= 0) throw std::invalid_argument("tensor dimensions must be positive");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> dims) : dims_(std::move(dims)), data_(checked_volume(dims_), 0.0) {}

Tensor::Tensor(std::vector<int> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    if (checked_volume(dims_) != data_.size())
        throw std::invalid_argument("tensor data length does not match shape " + shape_str());
}

Tensor Tensor::matrix(int rows, int cols) { return Tensor({rows, cols}); }

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    Tensor out({r, c});
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            throw std::invalid_argument("ragged initializer rows");
        int j = 0;
        for (double v : row) out.at(i, j++) = v;
        ++i;
    }
    return out;
}

Tensor Tensor::identity(int n) {
    Tensor out({n, n});
    for (int i = 0; i < n; ++i) out.at(i, i) = 1.0;
    return out;
}

int Tensor::rows() const {
    if (rank() != 2) throw std::invalid_argument("rows(): tensor is not rank 2: " + shape_str());
    return dims_[0];
}

int Tensor::cols() const {
    if (rank() != 2) throw std::invalid_argument("cols(): tensor is not rank 2: " + shape_str());
    return dims_[1];
}

std::size_t Tensor::flat2(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dims_[1]) +
           static_cast<std::size_t>(j);
}

std::size_t Tensor::flat3(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(dims_[1]) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(dims_[2]) +
           static_cast<std::size_t>(x);
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::string Tensor::shape_str() const {
    std::ostringstream out;
    out << '[';
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (k) out << 'x';
        out << dims_[k];
    }
    out << ']';
    return out.str();
}

Tensor Tensor::reshaped(std::vector<int> dims) const {
    if (checked_volume(dims) != data_.size())
        throw std::invalid_argument("reshape volume mismatch for " + shape_str());
    return Tensor(std::move(dims), data_);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2)
        throw std::invalid_argument("matmul needs rank-2 tensors, got " + a.shape_str() + " and " +
                                    b.shape_str());
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul inner dimension mismatch: " + a.shape_str() + " * " +
                                    b.shape_str());
    const int m = a.rows(), k_dim = a.cols(), n = b.cols();
    Tensor c({m, n});
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    if (!instr::counting()) {
        for (int i = 0; i < m; ++i) {
            const double* arow = pa + static_cast<std::size_t>(i) * k_dim;
            double* crow = pc + static_cast<std::size_t>(i) * n;
            for (int k = 0; k < k_dim; ++k) {
                const double aik = arow[k];
                const double* brow = pb + static_cast<std::size_t>(k) * n;
                for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
            }
        }
    } else {
        // Same loop order so values match the fast path bit for bit.
        for (int i = 0; i < m; ++i) {
            const double* arow = pa + static_cast<std::size_t>(i) * k_dim;
            double* crow = pc + static_cast<std::size_t>(i) * n;
            for (int k = 0; k < k_dim; ++k) {
                const double aik = arow[k];
                const double* brow = pb + static_cast<std::size_t>(k) * n;
                for (int j = 0; j < n; ++j) {
                    instr::tick_multiply();
                    crow[j] += aik * brow[j];
                }
            }
        }
    }
    return c;
}

Tensor transpose(const Tensor& a) {
    const int m = a.rows(), n = a.cols();
    Tensor t({n, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

Tensor init_uniform(int rows, int cols, Rng& rng) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("init_uniform needs rows, cols >= 1");
    const double bound = std::sqrt(6.0 / (rows + cols));
    Tensor out({rows, cols});
    for (double& v : out.values()) v = rng.uniform(-bound, bound);
    return out;
}

double rel_error(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("rel_error length mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    double diff = 0.0, mag_a = 0.0, mag_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        mag_a = std::max(mag_a, std::abs(a[i]));
        mag_b = std::max(mag_b, std::abs(b[i]));
    }
    return diff / std::max({mag_a, mag_b, 1e-12});
}

double rel_error(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("rel_error shape mismatch: " + a.shape_str() + " vs " +
                                    b.shape_str());
    return rel_error(a.values(), b.values());
}

}  // namespace geoatt
