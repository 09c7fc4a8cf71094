#include "gaitkit/cnn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "gaitkit/rng.hpp"
#include "validate.hpp"

namespace gaitkit {

namespace {

struct Shape3 {
    std::size_t h = 0, w = 0, c = 0;
    std::size_t count() const { return h * w * c; }
};

// Resolves the shape chain, filling in each layer's derived dimensions
// (conv in_channels, dense in_dim). Throws when a layer underflows.
Shape3 resolve_shapes(CnnArchitecture& arch) {
    Shape3 s{arch.input_h, arch.input_w, arch.input_c};
    for (std::size_t idx = 0; idx < arch.layers.size(); ++idx) {
        CnnLayer& layer = arch.layers[idx];
        const std::string where = "layer " + std::to_string(idx);
        switch (layer.kind) {
            case LayerKind::Conv:
                if (layer.kernel_h > s.h || layer.kernel_w > s.w)
                    throw Error("build_cnn: " + where + " kernel " +
                                std::to_string(layer.kernel_h) + "x" +
                                std::to_string(layer.kernel_w) + " exceeds input " +
                                std::to_string(s.h) + "x" + std::to_string(s.w));
                if (layer.filters == 0) throw Error("build_cnn: " + where + " has no filters");
                layer.in_channels = s.c;
                s = {s.h - layer.kernel_h + 1, s.w - layer.kernel_w + 1, layer.filters};
                break;
            case LayerKind::Relu:
                break;
            case LayerKind::MaxPool:
                if (layer.pool_h == 0 || layer.pool_w == 0)
                    throw Error("build_cnn: " + where + " has zero pool size");
                if (layer.pool_h > s.h || layer.pool_w > s.w)
                    throw Error("build_cnn: " + where + " pool " + std::to_string(layer.pool_h) +
                                "x" + std::to_string(layer.pool_w) + " exceeds input " +
                                std::to_string(s.h) + "x" + std::to_string(s.w));
                s = {s.h / layer.pool_h, s.w / layer.pool_w, s.c};
                break;
            case LayerKind::Flatten:
                s = {1, 1, s.count()};
                break;
            case LayerKind::Dense:
                if (s.h != 1 || s.w != 1)
                    throw Error("build_cnn: " + where + " (dense) needs flattened input");
                if (layer.units == 0) throw Error("build_cnn: " + where + " has zero units");
                layer.in_dim = s.c;
                s = {1, 1, layer.units};
                break;
        }
    }
    return s;
}

double glorot_limit(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

Tensor4 conv_forward(const CnnLayer& l, const Tensor4& in) {
    const std::size_t oh = in.h - l.kernel_h + 1;
    const std::size_t ow = in.w - l.kernel_w + 1;
    Tensor4 out(in.n, oh, ow, l.filters);
    for (std::size_t i = 0; i < in.n; ++i)
        for (std::size_t y = 0; y < oh; ++y)
            for (std::size_t x = 0; x < ow; ++x) {
                double* dst = &out.at(i, y, x, 0);
                for (std::size_t f = 0; f < l.filters; ++f) dst[f] = l.bias[f];
                for (std::size_t dy = 0; dy < l.kernel_h; ++dy)
                    for (std::size_t dx = 0; dx < l.kernel_w; ++dx) {
                        const double* src = &in.at(i, y + dy, x + dx, 0);
                        const double* wrow =
                            &l.weights[(dy * l.kernel_w + dx) * l.in_channels * l.filters];
                        for (std::size_t ci = 0; ci < l.in_channels; ++ci) {
                            const double v = src[ci];
                            const double* wf = wrow + ci * l.filters;
                            for (std::size_t f = 0; f < l.filters; ++f) dst[f] += v * wf[f];
                        }
                    }
            }
    return out;
}

void conv_backward(const CnnLayer& l, const Tensor4& in, const Tensor4& grad_out,
                   Tensor4& grad_in, std::vector<double>& grad_w, std::vector<double>& grad_b) {
    grad_in = Tensor4(in.n, in.h, in.w, in.c);
    grad_w.assign(l.weights.size(), 0.0);
    grad_b.assign(l.bias.size(), 0.0);
    for (std::size_t i = 0; i < in.n; ++i)
        for (std::size_t y = 0; y < grad_out.h; ++y)
            for (std::size_t x = 0; x < grad_out.w; ++x) {
                const double* go = &grad_out.at(i, y, x, 0);
                for (std::size_t f = 0; f < l.filters; ++f) grad_b[f] += go[f];
                for (std::size_t dy = 0; dy < l.kernel_h; ++dy)
                    for (std::size_t dx = 0; dx < l.kernel_w; ++dx) {
                        const double* src = &in.at(i, y + dy, x + dx, 0);
                        double* gi = &grad_in.at(i, y + dy, x + dx, 0);
                        const std::size_t base = (dy * l.kernel_w + dx) * l.in_channels * l.filters;
                        for (std::size_t ci = 0; ci < l.in_channels; ++ci) {
                            const double* wf = &l.weights[base + ci * l.filters];
                            double* gw = &grad_w[base + ci * l.filters];
                            double acc = 0.0;
                            for (std::size_t f = 0; f < l.filters; ++f) {
                                acc += go[f] * wf[f];
                                gw[f] += go[f] * src[ci];
                            }
                            gi[ci] += acc;
                        }
                    }
            }
}

Tensor4 relu_forward(const Tensor4& in) {
    Tensor4 out = in;
    for (double& v : out.data) v = v > 0 ? v : 0.0;
    return out;
}

// relu'(0) = 0.
Tensor4 relu_backward(const Tensor4& in, const Tensor4& grad_out) {
    Tensor4 grad_in = grad_out;
    for (std::size_t k = 0; k < in.data.size(); ++k)
        if (in.data[k] <= 0) grad_in.data[k] = 0.0;
    return grad_in;
}

// Forward pass also records the flat argmax index per pooled cell; ties go
// to the first maximum in row-major scan order.
Tensor4 pool_forward(const CnnLayer& l, const Tensor4& in, std::vector<std::size_t>& argmax) {
    const std::size_t oh = in.h / l.pool_h;
    const std::size_t ow = in.w / l.pool_w;
    Tensor4 out(in.n, oh, ow, in.c);
    argmax.assign(out.size(), 0);
    for (std::size_t i = 0; i < in.n; ++i)
        for (std::size_t y = 0; y < oh; ++y)
            for (std::size_t x = 0; x < ow; ++x)
                for (std::size_t ch = 0; ch < in.c; ++ch) {
                    double best = -std::numeric_limits<double>::infinity();
                    std::size_t best_at = 0;
                    for (std::size_t dy = 0; dy < l.pool_h; ++dy)
                        for (std::size_t dx = 0; dx < l.pool_w; ++dx) {
                            const std::size_t yy = y * l.pool_h + dy;
                            const std::size_t xx = x * l.pool_w + dx;
                            const double v = in.at(i, yy, xx, ch);
                            if (v > best) {
                                best = v;
                                best_at = ((i * in.h + yy) * in.w + xx) * in.c + ch;
                            }
                        }
                    out.at(i, y, x, ch) = best;
                    argmax[((i * oh + y) * ow + x) * in.c + ch] = best_at;
                }
    return out;
}

Tensor4 pool_backward(const Tensor4& in, const Tensor4& grad_out,
                      const std::vector<std::size_t>& argmax) {
    Tensor4 grad_in(in.n, in.h, in.w, in.c);
    for (std::size_t k = 0; k < grad_out.data.size(); ++k)
        grad_in.data[argmax[k]] += grad_out.data[k];
    return grad_in;
}

Tensor4 flatten_forward(const Tensor4& in) {
    Tensor4 out = in;
    out.h = 1;
    out.w = 1;
    out.c = in.sample_size();
    return out;
}

Tensor4 dense_forward(const CnnLayer& l, const Tensor4& in) {
    Tensor4 out(in.n, 1, 1, l.units);
    for (std::size_t i = 0; i < in.n; ++i) {
        const double* src = &in.data[i * l.in_dim];
        double* dst = &out.data[i * l.units];
        std::copy(l.bias.begin(), l.bias.end(), dst);
        for (std::size_t j = 0; j < l.in_dim; ++j) {
            const double v = src[j];
            const double* wrow = &l.weights[j * l.units];
            for (std::size_t u = 0; u < l.units; ++u) dst[u] += v * wrow[u];
        }
    }
    return out;
}

void dense_backward(const CnnLayer& l, const Tensor4& in, const Tensor4& grad_out,
                    Tensor4& grad_in, std::vector<double>& grad_w, std::vector<double>& grad_b) {
    grad_in = Tensor4(in.n, in.h, in.w, in.c);
    grad_w.assign(l.weights.size(), 0.0);
    grad_b.assign(l.bias.size(), 0.0);
    for (std::size_t i = 0; i < in.n; ++i) {
        const double* src = &in.data[i * l.in_dim];
        const double* go = &grad_out.data[i * l.units];
        double* gi = &grad_in.data[i * l.in_dim];
        for (std::size_t u = 0; u < l.units; ++u) grad_b[u] += go[u];
        for (std::size_t j = 0; j < l.in_dim; ++j) {
            const double* wrow = &l.weights[j * l.units];
            double* gwrow = &grad_w[j * l.units];
            double acc = 0.0;
            for (std::size_t u = 0; u < l.units; ++u) {
                acc += go[u] * wrow[u];
                gwrow[u] += go[u] * src[j];
            }
            gi[j] = acc;
        }
    }
    return;
}

void check_batch_shape(const CnnModel& model, const Tensor4& batch, const char* who) {
    const auto& a = model.arch;
    if (batch.h != a.input_h || batch.w != a.input_w || batch.c != a.input_c)
        throw Error(std::string(who) + ": batch shape (" + std::to_string(batch.h) + "," +
                    std::to_string(batch.w) + "," + std::to_string(batch.c) +
                    ") does not match architecture input (" + std::to_string(a.input_h) + "," +
                    std::to_string(a.input_w) + "," + std::to_string(a.input_c) + ")");
    if (batch.n == 0) throw Error(std::string(who) + ": empty batch");
}

// Runs the stack, keeping per-layer inputs and pool argmaxes when caching.
struct ForwardTrace {
    std::vector<Tensor4> inputs;                  // input of each layer
    std::vector<std::vector<std::size_t>> pools;  // argmax per pool layer slot
    Tensor4 logits;
};

ForwardTrace run_forward(const CnnModel& model, const Tensor4& batch, bool keep_cache) {
    ForwardTrace trace;
    Tensor4 current = batch;
    for (const auto& layer : model.arch.layers) {
        if (keep_cache) trace.inputs.push_back(current);
        std::vector<std::size_t> argmax;
        switch (layer.kind) {
            case LayerKind::Conv:
                current = conv_forward(layer, current);
                break;
            case LayerKind::Relu:
                current = relu_forward(current);
                break;
            case LayerKind::MaxPool:
                current = pool_forward(layer, current, argmax);
                break;
            case LayerKind::Flatten:
                current = flatten_forward(current);
                break;
            case LayerKind::Dense:
                current = dense_forward(layer, current);
                break;
        }
        if (keep_cache) trace.pools.push_back(std::move(argmax));
    }
    trace.logits = std::move(current);
    return trace;
}

Matrix softmax_rows(const Tensor4& logits, std::size_t classes) {
    Matrix proba(logits.n, classes);
    for (std::size_t i = 0; i < logits.n; ++i) {
        const double* z = &logits.data[i * classes];
        double zmax = z[0];
        for (std::size_t k = 1; k < classes; ++k) zmax = std::max(zmax, z[k]);
        double sum = 0.0;
        for (std::size_t k = 0; k < classes; ++k) {
            proba(i, k) = std::exp(z[k] - zmax);
            sum += proba(i, k);
        }
        for (std::size_t k = 0; k < classes; ++k) proba(i, k) /= sum;
    }
    return proba;
}

}  // namespace

CnnArchitecture CnnArchitecture::reference(std::size_t input_h, std::size_t input_w) {
    CnnArchitecture arch;
    arch.input_h = input_h;
    arch.input_w = input_w;
    arch.layers = {
        CnnLayer::conv(16, 5, 3), CnnLayer::relu(),       CnnLayer::max_pool(2, 2),
        CnnLayer::conv(32, 5, 2), CnnLayer::relu(),       CnnLayer::max_pool(2, 1),
        CnnLayer::flatten(),      CnnLayer::dense(64),    CnnLayer::relu(),
        CnnLayer::dense(2),
    };
    return arch;
}

CnnModel build_cnn(const CnnArchitecture& arch, std::uint64_t seed) {
    CnnModel model;
    model.arch = arch;
    const Shape3 out = resolve_shapes(model.arch);
    if (model.arch.layers.empty() || model.arch.layers.back().kind != LayerKind::Dense)
        throw Error("build_cnn: network must end in a dense layer");
    model.n_classes = out.c;
    if (model.n_classes != 2)
        throw Error("build_cnn: final dense layer must have 2 units, got " +
                    std::to_string(model.n_classes));

    Rng rng(seed);
    for (auto& layer : model.arch.layers) {
        if (layer.kind == LayerKind::Conv) {
            const std::size_t fan_in = layer.kernel_h * layer.kernel_w * layer.in_channels;
            const std::size_t fan_out = layer.kernel_h * layer.kernel_w * layer.filters;
            const double limit = glorot_limit(fan_in, fan_out);
            layer.weights.resize(fan_in * layer.filters);
            for (double& w : layer.weights) w = rng.uniform(-limit, limit);
            layer.bias.assign(layer.filters, 0.0);
        } else if (layer.kind == LayerKind::Dense) {
            const double limit = glorot_limit(layer.in_dim, layer.units);
            layer.weights.resize(layer.in_dim * layer.units);
            for (double& w : layer.weights) w = rng.uniform(-limit, limit);
            layer.bias.assign(layer.units, 0.0);
        }
    }
    return model;
}

Matrix cnn_forward(const CnnModel& model, const Tensor4& batch) {
    check_batch_shape(model, batch, "cnn_forward");
    const ForwardTrace trace = run_forward(model, batch, false);
    return softmax_rows(trace.logits, model.n_classes);
}

namespace {

CnnGradients backward_from_trace(const CnnModel& model, const ForwardTrace& trace,
                                 const Matrix& proba, const std::vector<int>& labels) {
    const std::size_t batch_n = proba.rows();
    // d(mean CE)/d(logits) = (softmax - onehot) / n
    Tensor4 grad(batch_n, 1, 1, model.n_classes);
    for (std::size_t i = 0; i < batch_n; ++i)
        for (std::size_t k = 0; k < model.n_classes; ++k)
            grad.data[i * model.n_classes + k] =
                (proba(i, k) - (static_cast<std::size_t>(labels[i]) == k ? 1.0 : 0.0)) /
                static_cast<double>(batch_n);

    CnnGradients grads;
    grads.weights.resize(model.arch.layers.size());
    grads.bias.resize(model.arch.layers.size());
    for (std::size_t idx = model.arch.layers.size(); idx-- > 0;) {
        const CnnLayer& layer = model.arch.layers[idx];
        const Tensor4& input = trace.inputs[idx];
        Tensor4 grad_in;
        switch (layer.kind) {
            case LayerKind::Conv:
                conv_backward(layer, input, grad, grad_in, grads.weights[idx], grads.bias[idx]);
                break;
            case LayerKind::Relu:
                grad_in = relu_backward(input, grad);
                break;
            case LayerKind::MaxPool:
                grad_in = pool_backward(input, grad, trace.pools[idx]);
                break;
            case LayerKind::Flatten:
                grad_in = grad;
                grad_in.h = input.h;
                grad_in.w = input.w;
                grad_in.c = input.c;
                break;
            case LayerKind::Dense:
                dense_backward(layer, input, grad, grad_in, grads.weights[idx], grads.bias[idx]);
                break;
        }
        grad = std::move(grad_in);
    }
    return grads;
}

double mean_cross_entropy(const Matrix& proba, const std::vector<int>& labels) {
    double loss = 0.0;
    for (std::size_t i = 0; i < proba.rows(); ++i) {
        const double p = std::max(proba(i, static_cast<std::size_t>(labels[i])), 1e-300);
        loss -= std::log(p);
    }
    return loss / static_cast<double>(proba.rows());
}

}  // namespace

CnnGradients cnn_backward(const CnnModel& model, const Tensor4& batch,
                          const std::vector<int>& labels) {
    check_batch_shape(model, batch, "cnn_backward");
    if (labels.size() != batch.n)
        throw Error("cnn_backward: " + std::to_string(labels.size()) + " labels for batch of " +
                    std::to_string(batch.n));
    detail::check_binary_labels(labels, "cnn_backward");
    const ForwardTrace trace = run_forward(model, batch, true);
    const Matrix proba = softmax_rows(trace.logits, model.n_classes);
    return backward_from_trace(model, trace, proba, labels);
}

double cnn_loss(const CnnModel& model, const Tensor4& batch, const std::vector<int>& labels) {
    const Matrix proba = cnn_forward(model, batch);
    return mean_cross_entropy(proba, labels);
}

std::vector<double> cnn_train(CnnModel& model, const Tensor4& data, const std::vector<int>& labels,
                              const TrainConfig& config) {
    check_batch_shape(model, data, "cnn_train");
    if (labels.size() != data.n)
        throw Error("cnn_train: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(data.n) + " samples");
    detail::check_binary_labels(labels, "cnn_train");
    std::array<std::size_t, 2> per_class{};
    for (int v : labels) ++per_class[static_cast<std::size_t>(v)];
    if (per_class[0] < 2 || per_class[1] < 2)
        throw Error("cnn_train: need at least 2 samples per class");
    if (config.batch_size == 0) throw Error("cnn_train: batch size must be positive");

    // Adam state per parameterized layer.
    struct AdamSlot {
        std::vector<double> m_w, v_w, m_b, v_b;
    };
    std::vector<AdamSlot> adam(model.arch.layers.size());
    for (std::size_t idx = 0; idx < model.arch.layers.size(); ++idx) {
        const auto& layer = model.arch.layers[idx];
        if (!layer.has_params()) continue;
        adam[idx].m_w.assign(layer.weights.size(), 0.0);
        adam[idx].v_w.assign(layer.weights.size(), 0.0);
        adam[idx].m_b.assign(layer.bias.size(), 0.0);
        adam[idx].v_b.assign(layer.bias.size(), 0.0);
    }

    Rng rng(config.seed);
    std::vector<std::size_t> order(data.n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> history;
    history.reserve(config.epochs);
    const std::size_t sample_size = data.sample_size();
    std::size_t step = 0;

    auto adam_update = [&](std::vector<double>& params, const std::vector<double>& grad,
                           std::vector<double>& m, std::vector<double>& v) {
        const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
        const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
        for (std::size_t p = 0; p < params.size(); ++p) {
            m[p] = config.beta1 * m[p] + (1.0 - config.beta1) * grad[p];
            v[p] = config.beta2 * v[p] + (1.0 - config.beta2) * grad[p] * grad[p];
            const double mhat = m[p] / bc1;
            const double vhat = v[p] / bc2;
            params[p] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
        }
    };

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t begin = 0; begin < data.n; begin += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, data.n - begin);
            Tensor4 batch(count, data.h, data.w, data.c);
            std::vector<int> batch_labels(count);
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t src = order[begin + i];
                std::copy_n(data.data.begin() + static_cast<std::ptrdiff_t>(src * sample_size),
                            sample_size,
                            batch.data.begin() + static_cast<std::ptrdiff_t>(i * sample_size));
                batch_labels[i] = labels[src];
            }
            const ForwardTrace trace = run_forward(model, batch, true);
            const Matrix proba = softmax_rows(trace.logits, model.n_classes);
            const double batch_loss = mean_cross_entropy(proba, batch_labels);
            if (!std::isfinite(batch_loss))
                throw Error("cnn_train: non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(begin / config.batch_size));
            epoch_loss += batch_loss * static_cast<double>(count);

            const CnnGradients grads = backward_from_trace(model, trace, proba, batch_labels);
            ++step;
            for (std::size_t idx = 0; idx < model.arch.layers.size(); ++idx) {
                auto& layer = model.arch.layers[idx];
                if (!layer.has_params()) continue;
                adam_update(layer.weights, grads.weights[idx], adam[idx].m_w, adam[idx].v_w);
                adam_update(layer.bias, grads.bias[idx], adam[idx].m_b, adam[idx].v_b);
            }
        }
        epoch_loss /= static_cast<double>(data.n);
        history.push_back(epoch_loss);
        if (config.target_loss > 0 && epoch_loss < config.target_loss) break;
    }
    return history;
}

std::vector<int> cnn_predict(const CnnModel& model, const Tensor4& batch) {
    const Matrix proba = cnn_forward(model, batch);
    std::vector<int> labels(batch.n);
    for (std::size_t i = 0; i < batch.n; ++i) labels[i] = proba(i, 1) >= proba(i, 0) ? 1 : 0;
    return labels;
}

Tensor4 reshape_for_cnn(const std::vector<double>& flat) {
    if (flat.empty() || flat.size() % kNumChannels != 0)
        throw Error("reshape_for_cnn: vector length " + std::to_string(flat.size()) +
                    " is not a positive multiple of " + std::to_string(kNumChannels));
    Tensor4 t(1, flat.size() / kNumChannels, kNumChannels, 1);
    t.data = flat;
    return t;
}

Tensor4 reshape_for_cnn(const Window& window) { return reshape_for_cnn(window.values); }

Tensor4 rows_to_tensor(const Matrix& X, std::size_t height, std::size_t width) {
    if (X.cols() != height * width)
        throw Error("rows_to_tensor: row length " + std::to_string(X.cols()) +
                    " does not equal " + std::to_string(height) + "*" + std::to_string(width));
    Tensor4 t(X.rows(), height, width, 1);
    t.data = X.data();
    return t;
}

}  // namespace gaitkit
