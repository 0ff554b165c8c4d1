#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hfusion/errors.hpp"
#include "hfusion/rng.hpp"
#include "hfusion/tensor.hpp"

namespace hfusion {

/// Fully connected layer `y = W x + b` with gradient buffers.
template <std::floating_point T>
struct LinearLayer {
    Matrix<T> weight;       // out x in
    Vector<T> bias;         // out
    Matrix<T> grad_weight;  // shape of weight
    Vector<T> grad_bias;    // shape of bias

    LinearLayer() = default;
    LinearLayer(std::size_t in_dim, std::size_t out_dim)
        : weight(out_dim, in_dim), bias(out_dim), grad_weight(out_dim, in_dim), grad_bias(out_dim) {}

    std::size_t in_dim() const noexcept { return weight.cols(); }
    std::size_t out_dim() const noexcept { return weight.rows(); }

    void zero_grad() {
        grad_weight.fill(T{0});
        grad_bias.fill(T{0});
    }

    template <std::floating_point U>
    LinearLayer<U> cast() const {
        LinearLayer<U> out;
        out.weight = weight.template cast<U>();
        out.bias = bias.template cast<U>();
        out.grad_weight = grad_weight.template cast<U>();
        out.grad_bias = grad_bias.template cast<U>();
        return out;
    }
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
template <std::floating_point T>
void init_uniform(LinearLayer<T>& layer, SeededRng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_dim()));
    for (auto& w : layer.weight.values()) w = static_cast<T>(rng.uniform(-bound, bound));
    for (auto& b : layer.bias.values()) b = static_cast<T>(rng.uniform(-bound, bound));
    layer.zero_grad();
}

// Every reduction below accumulates in double, strictly left to right over
// the reduced index. Blocking over output rows only interleaves independent
// accumulators; it never reorders a single sum.

template <std::floating_point T>
Vector<T> linear_forward(const Vector<T>& x, const LinearLayer<T>& layer) {
    require_dim(x.dim(), layer.in_dim(), "linear_forward input");
    const std::size_t rows = layer.out_dim();
    const std::size_t cols = layer.in_dim();
    const T* w = layer.weight.values().data();
    const T* xv = x.values().data();
    Vector<T> y(rows);

    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
        const T* r0 = w + i * cols;
        const T* r1 = r0 + cols;
        const T* r2 = r1 + cols;
        const T* r3 = r2 + cols;
        double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            const double xj = xv[j];
            a0 += static_cast<double>(r0[j]) * xj;
            a1 += static_cast<double>(r1[j]) * xj;
            a2 += static_cast<double>(r2[j]) * xj;
            a3 += static_cast<double>(r3[j]) * xj;
        }
        y[i] = static_cast<T>(a0 + static_cast<double>(layer.bias[i]));
        y[i + 1] = static_cast<T>(a1 + static_cast<double>(layer.bias[i + 1]));
        y[i + 2] = static_cast<T>(a2 + static_cast<double>(layer.bias[i + 2]));
        y[i + 3] = static_cast<T>(a3 + static_cast<double>(layer.bias[i + 3]));
    }
    for (; i < rows; ++i) {
        const T* r = w + i * cols;
        double a = 0.0;
        for (std::size_t j = 0; j < cols; ++j) a += static_cast<double>(r[j]) * xv[j];
        y[i] = static_cast<T>(a + static_cast<double>(layer.bias[i]));
    }
    return y;
}

/// Returns dL/dx and accumulates dL/dW, dL/db into the layer's buffers.
/// Rows with a zero upstream gradient contribute nothing and are skipped.
template <std::floating_point T>
Vector<T> linear_backward(const Vector<T>& x, LinearLayer<T>& layer, const Vector<T>& grad_out) {
    require_dim(x.dim(), layer.in_dim(), "linear_backward input");
    require_dim(grad_out.dim(), layer.out_dim(), "linear_backward upstream gradient");
    const std::size_t rows = layer.out_dim();
    const std::size_t cols = layer.in_dim();
    const T* w = layer.weight.values().data();
    T* gw = layer.grad_weight.values().data();
    const T* xv = x.values().data();

    std::vector<double> acc(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        const T g = grad_out[i];
        if (g == T{0}) continue;
        const T* wr = w + i * cols;
        T* gr = gw + i * cols;
        const double gd = g;
        for (std::size_t j = 0; j < cols; ++j) {
            acc[j] += static_cast<double>(wr[j]) * gd;
            gr[j] += g * xv[j];
        }
        layer.grad_bias[i] += g;
    }
    Vector<T> grad_x(cols);
    for (std::size_t j = 0; j < cols; ++j) grad_x[j] = static_cast<T>(acc[j]);
    return grad_x;
}

template <std::floating_point T>
Vector<T> relu(const Vector<T>& x) {
    Vector<T> y(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) y[i] = x[i] > T{0} ? x[i] : T{0};
    return y;
}

/// Passes the gradient where the forward input was strictly positive.
template <std::floating_point T>
Vector<T> relu_backward(const Vector<T>& x, const Vector<T>& grad_out) {
    require_dim(grad_out.dim(), x.dim(), "relu_backward upstream gradient");
    Vector<T> g(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) g[i] = x[i] > T{0} ? grad_out[i] : T{0};
    return g;
}

/// Max-subtracted softmax. Outputs are floored at the smallest normal value
/// of T so they stay strictly positive when exp underflows.
template <std::floating_point T>
Vector<T> softmax(const Vector<T>& logits) {
    if (logits.empty()) throw ShapeError("softmax of an empty vector");
    T max_logit = logits[0];
    for (std::size_t i = 1; i < logits.dim(); ++i) max_logit = std::max(max_logit, logits[i]);

    std::vector<double> e(logits.dim());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.dim(); ++i) {
        e[i] = std::exp(static_cast<double>(logits[i]) - static_cast<double>(max_logit));
        sum += e[i];
    }
    Vector<T> out(logits.dim());
    for (std::size_t i = 0; i < logits.dim(); ++i) {
        out[i] = std::max(static_cast<T>(e[i] / sum), std::numeric_limits<T>::min());
    }
    return out;
}

inline constexpr double kProbabilityFloor = 1e-12;

inline void require_class_index(int target, std::size_t num_classes) {
    if (target < 0 || static_cast<std::size_t>(target) >= num_classes) {
        throw IndexError("target class " + std::to_string(target) + " outside [0, " +
                         std::to_string(num_classes) + ")");
    }
}

/// -ln(probs[target]), with the probability floored at 1e-12.
template <std::floating_point T>
T cross_entropy(const Vector<T>& probs, int target) {
    require_class_index(target, probs.dim());
    const double p = std::max(static_cast<double>(probs[static_cast<std::size_t>(target)]),
                              kProbabilityFloor);
    return static_cast<T>(-std::log(p));
}

/// Gradient of cross_entropy(softmax(z), target) with respect to z.
template <std::floating_point T>
Vector<T> softmax_cross_entropy_grad(const Vector<T>& probs, int target) {
    require_class_index(target, probs.dim());
    Vector<T> g = probs;
    g[static_cast<std::size_t>(target)] -= T{1};
    return g;
}

template <std::floating_point T>
struct DropoutResult {
    Vector<T> output;
    Vector<T> mask;  // 0 for dropped entries, 1/(1-p) for survivors
};

inline void require_dropout_rate(double p) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw ConfigError("dropout probability must lie in [0, 1), got " + std::to_string(p));
    }
}

/// Inverted dropout. Identity (and no random draws) when not training or
/// p == 0; otherwise `rng` must be non-null.
template <std::floating_point T>
DropoutResult<T> dropout(const Vector<T>& x, double p, bool training, SeededRng* rng) {
    require_dropout_rate(p);
    if (!training || p == 0.0) return {x, Vector<T>(x.dim(), T{1})};
    if (rng == nullptr) throw ConfigError("training-mode dropout needs a random stream");
    const T scale = static_cast<T>(1.0 / (1.0 - p));
    DropoutResult<T> r{Vector<T>(x.dim()), Vector<T>(x.dim())};
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const bool keep = !rng->bernoulli(p);
        r.mask[i] = keep ? scale : T{0};
        r.output[i] = x[i] * r.mask[i];
    }
    return r;
}

template <std::floating_point T>
Vector<T> dropout_backward(const Vector<T>& mask, const Vector<T>& grad_out) {
    require_dim(grad_out.dim(), mask.dim(), "dropout_backward upstream gradient");
    Vector<T> g(mask.dim());
    for (std::size_t i = 0; i < mask.dim(); ++i) g[i] = grad_out[i] * mask[i];
    return g;
}

/// Index of the largest value; ties go to the lowest index.
template <std::floating_point T>
std::size_t argmax(const Vector<T>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.dim(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

}  // namespace hfusion
