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

/// Mean of the per-region image vectors (rows of an N_r x d stack), summed in
/// row order in double precision.
template <std::floating_point T>
Vector<T> region_average(const Matrix<T>& regions) {
    if (regions.rows() == 0 || regions.cols() == 0) {
        throw ShapeError("region_average of an empty region stack");
    }
    std::vector<double> sum(regions.cols(), 0.0);
    for (std::size_t r = 0; r < regions.rows(); ++r) {
        const auto row = regions.row(r);
        for (std::size_t j = 0; j < row.size(); ++j) sum[j] += row[j];
    }
    const double n = static_cast<double>(regions.rows());
    Vector<T> out(regions.cols());
    for (std::size_t j = 0; j < out.dim(); ++j) out[j] = static_cast<T>(sum[j] / n);
    return out;
}

inline constexpr std::size_t kDefaultAdapterKernel = 9;

/// Trainable 1-channel 1D convolution (stride 1, zero same-padding) followed
/// by non-overlapping max pooling, mapping an image vector of any dim >=
/// target_dim onto exactly target_dim values.
template <std::floating_point T>
struct ImageAdapter {
    Vector<T> kernel;
    Vector<T> grad_kernel;
    std::size_t input_dim = 0;
    std::size_t target_dim = 0;
    std::size_t pool_window = 0;

    ImageAdapter() = default;
    ImageAdapter(std::size_t input, std::size_t target,
                 std::size_t kernel_size = kDefaultAdapterKernel)
        : kernel(kernel_size), grad_kernel(kernel_size), input_dim(input), target_dim(target) {
        if (kernel_size == 0 || kernel_size % 2 == 0) {
            throw ConfigError("adapter kernel length must be odd, got " +
                              std::to_string(kernel_size));
        }
        if (target == 0) throw ConfigError("adapter target dim must be positive");
        if (input < target) {
            throw ConfigError("adapter input dim " + std::to_string(input) +
                              " is smaller than its target dim " + std::to_string(target));
        }
        pool_window = (input + target - 1) / target;
    }

    /// Number of pooling windows that cover real convolution outputs; the
    /// remaining target positions are zero padding.
    std::size_t pooled_count() const noexcept {
        const std::size_t windows = (input_dim + pool_window - 1) / pool_window;
        return windows < target_dim ? windows : target_dim;
    }

    void zero_grad() { grad_kernel.fill(T{0}); }

    template <std::floating_point U>
    ImageAdapter<U> cast() const {
        ImageAdapter<U> out;
        out.kernel = kernel.template cast<U>();
        out.grad_kernel = grad_kernel.template cast<U>();
        out.input_dim = input_dim;
        out.target_dim = target_dim;
        out.pool_window = pool_window;
        return out;
    }
};

template <std::floating_point T>
void init_uniform(ImageAdapter<T>& adapter, SeededRng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(adapter.kernel.dim()));
    for (auto& k : adapter.kernel.values()) k = static_cast<T>(rng.uniform(-bound, bound));
    adapter.zero_grad();
}

template <std::floating_point T>
struct AdapterTrace {
    Vector<T> input;
    Vector<T> conv;
    /// Convolution index that won each pooling window (lowest index on ties).
    std::vector<std::size_t> winners;
};

template <std::floating_point T>
Vector<T> adapter_forward(const Vector<T>& p_raw, const ImageAdapter<T>& adapter,
                          AdapterTrace<T>* trace = nullptr) {
    require_dim(p_raw.dim(), adapter.input_dim, "image adapter input");
    const std::size_t n = p_raw.dim();
    const std::size_t k = adapter.kernel.dim();
    const std::size_t half = k / 2;

    Vector<T> conv(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t pos = i + t;  // shifted by `half`
            if (pos < half || pos - half >= n) continue;
            acc += static_cast<double>(adapter.kernel[t]) * static_cast<double>(p_raw[pos - half]);
        }
        conv[i] = static_cast<T>(acc);
    }

    const std::size_t w = adapter.pool_window;
    const std::size_t pooled = adapter.pooled_count();
    Vector<T> out(adapter.target_dim);
    std::vector<std::size_t> winners(pooled);
    for (std::size_t j = 0; j < pooled; ++j) {
        const std::size_t begin = j * w;
        const std::size_t end = std::min(begin + w, n);
        std::size_t best = begin;
        for (std::size_t i = begin + 1; i < end; ++i) {
            if (conv[i] > conv[best]) best = i;
        }
        winners[j] = best;
        out[j] = conv[best];
    }
    if (trace != nullptr) {
        trace->input = p_raw;
        trace->conv = std::move(conv);
        trace->winners = std::move(winners);
    }
    return out;
}

/// Routes each pooled gradient to its window winner and accumulates the
/// kernel gradient. Returns the gradient with respect to the adapter input.
template <std::floating_point T>
Vector<T> adapter_backward(const AdapterTrace<T>& trace, ImageAdapter<T>& adapter,
                           const Vector<T>& grad_out) {
    require_dim(grad_out.dim(), adapter.target_dim, "image adapter upstream gradient");
    const std::size_t n = trace.input.dim();
    const std::size_t k = adapter.kernel.dim();
    const std::size_t half = k / 2;

    std::vector<double> grad_kernel(k, 0.0);
    std::vector<double> grad_input(n, 0.0);
    for (std::size_t j = 0; j < trace.winners.size(); ++j) {
        const double g = grad_out[j];
        if (g == 0.0) continue;
        const std::size_t i = trace.winners[j];
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t pos = i + t;
            if (pos < half || pos - half >= n) continue;
            grad_kernel[t] += g * static_cast<double>(trace.input[pos - half]);
            grad_input[pos - half] += g * static_cast<double>(adapter.kernel[t]);
        }
    }
    for (std::size_t t = 0; t < k; ++t) adapter.grad_kernel[t] += static_cast<T>(grad_kernel[t]);
    Vector<T> gi(n);
    for (std::size_t m = 0; m < n; ++m) gi[m] = static_cast<T>(grad_input[m]);
    return gi;
}

}  // namespace hfusion
