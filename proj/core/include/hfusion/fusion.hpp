#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "hfusion/errors.hpp"
#include "hfusion/tensor.hpp"

namespace hfusion {

/// Parameter-free operator combining two representation vectors.
enum class FusionOp { Addition, Concatenation, Average };

inline constexpr FusionOp kAllFusionOps[] = {FusionOp::Addition, FusionOp::Concatenation,
                                             FusionOp::Average};

std::string_view to_string(FusionOp op) noexcept;
/// Accepts "add"/"addition", "concat"/"concatenation", "avg"/"average".
FusionOp parse_fusion_op(std::string_view text);

/// Output dimension of `op` over inputs of dims d1, d2.
std::size_t fused_dim(FusionOp op, std::size_t d1, std::size_t d2);

template <std::floating_point T>
Vector<T> fuse(FusionOp op, const Vector<T>& x1, const Vector<T>& x2) {
    const std::size_t d = fused_dim(op, x1.dim(), x2.dim());
    Vector<T> out(d);
    switch (op) {
        case FusionOp::Addition:
            for (std::size_t i = 0; i < d; ++i) out[i] = x1[i] + x2[i];
            break;
        case FusionOp::Average:
            for (std::size_t i = 0; i < d; ++i) out[i] = (x1[i] + x2[i]) * T{0.5};
            break;
        case FusionOp::Concatenation:
            for (std::size_t i = 0; i < x1.dim(); ++i) out[i] = x1[i];
            for (std::size_t i = 0; i < x2.dim(); ++i) out[x1.dim() + i] = x2[i];
            break;
    }
    return out;
}

/// Splits the gradient of fuse(op, x1, x2) into gradients for x1 and x2.
template <std::floating_point T>
std::pair<Vector<T>, Vector<T>> fuse_backward(FusionOp op, std::size_t d1, std::size_t d2,
                                              const Vector<T>& grad_out) {
    require_dim(grad_out.dim(), fused_dim(op, d1, d2), "fuse_backward upstream gradient");
    Vector<T> g1(d1);
    Vector<T> g2(d2);
    switch (op) {
        case FusionOp::Addition:
            g1 = grad_out;
            g2 = grad_out;
            break;
        case FusionOp::Average:
            for (std::size_t i = 0; i < d1; ++i) g1[i] = grad_out[i] * T{0.5};
            g2 = g1;
            break;
        case FusionOp::Concatenation:
            for (std::size_t i = 0; i < d1; ++i) g1[i] = grad_out[i];
            for (std::size_t i = 0; i < d2; ++i) g2[i] = grad_out[d1 + i];
            break;
    }
    return {std::move(g1), std::move(g2)};
}

/// Requested slot operators and input dimensions.
///
/// Slots follow the nesting Z_final(P, Z_outer(Z_inner(T_f, D_f), Z_inner(T_c, D_c))):
/// `inner` fuses title with description inside each encoder branch, `outer`
/// fuses the two encoder branches, `final` fuses the image with the text.
struct PlanConfig {
    FusionOp inner = FusionOp::Average;
    FusionOp outer = FusionOp::Average;
    FusionOp final = FusionOp::Average;
    std::size_t d_text = 768;
    /// Dimension of the second text encoder; 0 means "same as d_text".
    std::size_t d_text_second = 0;
    std::size_t d_image_raw = 2048;
};

/// A validated plan with every intermediate dimension resolved.
struct FusionPlan {
    FusionOp inner_op = FusionOp::Average;
    FusionOp outer_op = FusionOp::Average;
    FusionOp final_op = FusionOp::Average;

    std::size_t d_text_first = 0;   // title/description dim, first encoder
    std::size_t d_text_second = 0;  // title/description dim, second encoder
    std::size_t d_image_raw = 0;

    std::size_t d_branch_first = 0;   // Z_inner output, first encoder
    std::size_t d_branch_second = 0;  // Z_inner output, second encoder
    std::size_t d_text_fused = 0;     // Z_outer output
    std::size_t d_adapter = 0;        // image adapter target dim
    std::size_t d_fused = 0;          // Z_final output, head input

    friend bool operator==(const FusionPlan&, const FusionPlan&) = default;
};

/// Runs dimension inference. Throws ShapeError naming the failing slot, or
/// ConfigError when the image is narrower than the adapter target.
FusionPlan build_plan(const PlanConfig& config);

PlanConfig plan_config_of(const FusionPlan& plan);

}  // namespace hfusion
