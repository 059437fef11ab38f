#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geoatt/expatt.hpp"
#include "geoatt/tensor.hpp"

namespace geoatt {

// Direct (cross-correlation, no filter flip) convolution with zero
// same-padding for k=3; k=1 has none. Output spatial dims ceil(in/stride).
struct Conv2dLayer {
    int c_in = 1;
    int c_out = 1;
    int kernel_size = 3;  // 3 or 1
    int stride = 1;       // 1 or 2
    Tensor weights;       // c_out x c_in x k x k
    Tensor bias;          // c_out

    static Conv2dLayer create(int c_in, int c_out, int kernel_size, int stride, Rng& rng);
};

struct ConvCache {
    Tensor x;
};

struct ConvGrads {
    Tensor dx;
    Tensor dweights;
    Tensor dbias;
};

Tensor conv2d_forward(const Conv2dLayer& layer, const Tensor& x, ConvCache* cache = nullptr);
ConvGrads conv2d_backward(const Conv2dLayer& layer, const ConvCache& cache, const Tensor& dy);

// 3x3 mean, stride 2, zero same-padding; the divisor is the full window
// size 9 everywhere, padding counted.
Tensor avgpool3x3s2(const Tensor& x);
Tensor avgpool3x3s2_backward(const Tensor& dy, int in_h, int in_w);

// c_expatt = multiple of n_heads closest to ratio*c_out (ties upward),
// floored at n_heads and capped so c_conv >= 1.
std::pair<int, int> split_channels(int c_out, double ratio, int n_heads);  // (c_conv, c_expatt)

// Convolution and explicit attention side by side on the same input,
// concatenated along channels. With stride 2 the attention branch goes
// through avgpool3x3s2 so spatial dims match the conv branch.
struct AugmentedConvBlock {
    Conv2dLayer conv;
    ExpAttLayer attn;
    int stride = 1;

    AugmentedConvBlock(int c_in, int c_out, double ratio, int n_heads, GridShape in_shape,
                       KernelSpec kernel, int offset, int stride, Rng& rng);
};

struct AugmentedCache {
    ConvCache conv;
    ExpAttCache attn;
    GridShape in_shape;
    bool pooled = false;
};

struct AugmentedGrads {
    Tensor dx;
    ConvGrads conv;
    ExpAttGrads attn;
};

Tensor augmented_forward(AugmentedConvBlock& block, const Tensor& x, AugmentedCache* cache = nullptr);
AugmentedGrads augmented_backward(AugmentedConvBlock& block, const AugmentedCache& cache,
                                  const Tensor& dy);

// 16x16 single-channel images, one Gaussian blob (amplitude 1, std 1.5 px)
// centered uniformly in one of three fixed radial bands around the image
// center; class label = band. Plus i.i.d. Gaussian pixel noise.
struct ToySample {
    Tensor image;  // 1 x 16 x 16
    int label = 0;
};

std::vector<ToySample> make_toy_dataset(std::uint64_t seed, int n, double noise_std = 0.1);

// Blob center bands, inclusive radii around the image center.
struct ToyRegions {
    static constexpr double kInner = 2.0;
    static constexpr double kMidLo = 4.0;
    static constexpr double kMidHi = 5.5;
    static constexpr double kOuterLo = 7.0;
    static constexpr double kOuterHi = 8.5;
};

struct ToyNetConfig {
    std::uint64_t seed = 7;
    int steps = 2000;
    double learning_rate = 0.05;
    double momentum = 0.9;
    int batch_size = 32;
    int dataset_size = 300;
    double sigma_init = 0.75;
    KernelKind kernel = KernelKind::Gaussian;
    int offset = 1;
};

struct TrainReport {
    std::vector<double> loss;      // one entry per step
    std::vector<double> accuracy;  // one entry per epoch (full train-set pass)
    std::vector<double> sigma;     // radius after each step's update
    std::string param_digest;      // FNV-1a over the final parameter bytes
    ToyNetConfig config;

    double final_accuracy() const { return accuracy.empty() ? 0.0 : accuracy.back(); }
    double final_sigma() const { return sigma.empty() ? 0.0 : sigma.back(); }
};

// Raised when the training loss stops being finite.
struct TrainDiverged : std::runtime_error {
    int step;
    explicit TrainDiverged(int step_index)
        : std::runtime_error("training diverged: non-finite loss at step " +
                             std::to_string(step_index)),
          step(step_index) {}
};

// Stem conv 1->16, augmented block 16->32 (4 heads, ratio 0.1, stride 2),
// global average pool, linear 32->3. SGD with momentum on softmax
// cross-entropy; sigma clamped to the floor after every update.
TrainReport train_toy(const ToyNetConfig& config);

std::string train_report_to_json(const TrainReport& report);

}  // namespace geoatt
