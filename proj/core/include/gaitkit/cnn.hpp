#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitkit/matrix.hpp"
#include "gaitkit/windowing.hpp"

namespace gaitkit {

// Batched NHWC tensor (batch, height, width, channels), contiguous doubles.
struct Tensor4 {
    std::size_t n = 0, h = 0, w = 0, c = 0;
    std::vector<double> data;

    Tensor4() = default;
    Tensor4(std::size_t n_, std::size_t h_, std::size_t w_, std::size_t c_)
        : n(n_), h(h_), w(w_), c(c_), data(n_ * h_ * w_ * c_, 0.0) {}

    std::size_t size() const { return data.size(); }
    std::size_t sample_size() const { return h * w * c; }

    double& at(std::size_t i, std::size_t y, std::size_t x, std::size_t ch) {
        return data[((i * h + y) * w + x) * c + ch];
    }
    const double& at(std::size_t i, std::size_t y, std::size_t x, std::size_t ch) const {
        return data[((i * h + y) * w + x) * c + ch];
    }
};

enum class LayerKind { Conv, Relu, MaxPool, Flatten, Dense };

// One network layer; only the fields for its kind are meaningful. Conv is
// stride-1 valid (no padding); MaxPool is non-overlapping with floor
// division on odd extents.
struct CnnLayer {
    LayerKind kind = LayerKind::Relu;

    // Conv
    std::size_t filters = 0, kernel_h = 0, kernel_w = 0, in_channels = 0;
    // MaxPool
    std::size_t pool_h = 0, pool_w = 0;
    // Dense
    std::size_t in_dim = 0, units = 0;

    // Conv / Dense parameters. Conv weights are indexed
    // ((dy*kernel_w + dx)*in_channels + ci)*filters + f; dense weights are
    // in_dim x units row-major.
    std::vector<double> weights;
    std::vector<double> bias;

    bool has_params() const { return kind == LayerKind::Conv || kind == LayerKind::Dense; }

    static CnnLayer conv(std::size_t filters, std::size_t kh, std::size_t kw) {
        CnnLayer l;
        l.kind = LayerKind::Conv;
        l.filters = filters;
        l.kernel_h = kh;
        l.kernel_w = kw;
        return l;
    }
    static CnnLayer relu() { return {}; }
    static CnnLayer max_pool(std::size_t ph, std::size_t pw) {
        CnnLayer l;
        l.kind = LayerKind::MaxPool;
        l.pool_h = ph;
        l.pool_w = pw;
        return l;
    }
    static CnnLayer flatten() {
        CnnLayer l;
        l.kind = LayerKind::Flatten;
        return l;
    }
    static CnnLayer dense(std::size_t units) {
        CnnLayer l;
        l.kind = LayerKind::Dense;
        l.units = units;
        return l;
    }
};

// Layer stack over (input_h, input_w, 1) windows ending in a Dense layer
// whose units equal the class count; softmax is applied by forward().
struct CnnArchitecture {
    std::size_t input_h = 200;
    std::size_t input_w = 6;
    std::size_t input_c = 1;
    std::vector<CnnLayer> layers;

    // Conv(16,5x3) - ReLU - Pool(2x2) - Conv(32,5x2) - ReLU - Pool(2x1) -
    // Flatten - Dense(64) - ReLU - Dense(2). Kernels are taller than wide
    // because the input is 200 (time) x 6 (channels).
    static CnnArchitecture reference(std::size_t input_h = 200, std::size_t input_w = 6);
};

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t batch_size = 32;
    std::size_t epochs = 30;
    std::uint64_t seed = 0;
    double target_loss = 0.0;  // > 0: stop once an epoch's mean loss drops below
};

// Network with initialized parameters (Glorot uniform weights, zero biases,
// seeded). Shape-checks the whole chain at build time.
struct CnnModel {
    CnnArchitecture arch;  // layers carry the live parameters
    std::size_t n_classes = 2;
};

CnnModel build_cnn(const CnnArchitecture& arch, std::uint64_t seed);

// Per-layer parameter gradients, aligned with arch.layers (empty vectors for
// parameterless layers).
struct CnnGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;
};

// Class probabilities, rows summing to 1. Batch shape must match the
// architecture input exactly.
Matrix cnn_forward(const CnnModel& model, const Tensor4& batch);

// Gradients of the mean cross-entropy over the batch w.r.t. every parameter.
CnnGradients cnn_backward(const CnnModel& model, const Tensor4& batch,
                          const std::vector<int>& labels);

double cnn_loss(const CnnModel& model, const Tensor4& batch, const std::vector<int>& labels);

// Adam over seeded shuffled mini-batches; returns the per-epoch mean loss
// history. Requires at least 2 samples per class. Aborts with an error
// naming the epoch/batch if the loss turns non-finite.
std::vector<double> cnn_train(CnnModel& model, const Tensor4& data, const std::vector<int>& labels,
                              const TrainConfig& config);

std::vector<int> cnn_predict(const CnnModel& model, const Tensor4& batch);

// Inverse of windowing::flatten with a trailing singleton channel axis:
// flat[k] -> tensor[k div 6][k mod 6][0]. Length must be a positive multiple
// of 6 (1200 for the reference 200x6 window).
Tensor4 reshape_for_cnn(const std::vector<double>& flat);
Tensor4 reshape_for_cnn(const Window& window);

// Stacks flattened windows (rows of X) into one NHWC batch of
// (height, width, 1) slices; X.cols() must equal height*width.
Tensor4 rows_to_tensor(const Matrix& X, std::size_t height, std::size_t width);

}  // namespace gaitkit
