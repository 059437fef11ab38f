#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace geoatt {

class Rng;

// Dense row-major tensor of 64-bit reals. Treated as a value: built once,
// then shared read-only. All arithmetic in this project is double
// precision; gradient checks at 1e-6 need it.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> dims);  // zero filled
    Tensor(std::vector<int> dims, std::vector<double> data);

    static Tensor matrix(int rows, int cols);
    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Tensor identity(int n);

    const std::vector<int>& dims() const { return dims_; }
    int dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
    int rank() const { return static_cast<int>(dims_.size()); }
    std::size_t size() const { return data_.size(); }

    // rank-2 views
    int rows() const;
    int cols() const;
    double at(int i, int j) const { return data_[flat2(i, j)]; }
    double& at(int i, int j) { return data_[flat2(i, j)]; }

    // rank-3 views (channel, row, column)
    double at(int c, int y, int x) const { return data_[flat3(c, y, x)]; }
    double& at(int c, int y, int x) { return data_[flat3(c, y, x)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

    bool same_shape(const Tensor& other) const { return dims_ == other.dims_; }
    bool all_finite() const;
    std::string shape_str() const;

    Tensor reshaped(std::vector<int> dims) const;

private:
    std::size_t flat2(int i, int j) const;
    std::size_t flat3(int c, int y, int x) const;

    std::vector<int> dims_;
    std::vector<double> data_;
};

// c[m][n] = sum_k a[m][k] * b[k][n]; throws on inner-dimension mismatch.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// Entries i.i.d. uniform on [-b, b] with b = sqrt(6 / (rows + cols)).
Tensor init_uniform(int rows, int cols, Rng& rng);

// max-abs difference over max magnitude, guarded at 1e-12.
double rel_error(std::span<const double> a, std::span<const double> b);
double rel_error(const Tensor& a, const Tensor& b);

}  // namespace geoatt
