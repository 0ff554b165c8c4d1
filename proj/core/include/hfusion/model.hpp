#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfusion/errors.hpp"
#include "hfusion/fusion.hpp"
#include "hfusion/image.hpp"
#include "hfusion/layers.hpp"
#include "hfusion/optimizer.hpp"
#include "hfusion/rng.hpp"
#include "hfusion/tensor.hpp"

namespace hfusion {

enum class HeadVariant { Basic, WithDropout, WithMoreLayers };

inline constexpr HeadVariant kAllHeadVariants[] = {HeadVariant::Basic, HeadVariant::WithDropout,
                                                   HeadVariant::WithMoreLayers};

std::string_view to_string(HeadVariant v) noexcept;
/// Accepts "basic", "dropout", "more-layers".
HeadVariant parse_head_variant(std::string_view text);

/// Name used in the dropout substream label "dropout:<layer>:<step>".
std::string_view dropout_layer_name(HeadVariant v) noexcept;

struct HeadConfig {
    HeadVariant variant = HeadVariant::Basic;
    std::size_t num_classes = 27;
    std::size_t hidden1 = 512;
    std::size_t hidden2 = 256;
    std::size_t extra = 256;  // WithMoreLayers only
    double dropout_p = 0.3;
    std::size_t adapter_kernel = kDefaultAdapterKernel;

    void validate() const;
};

/// Three linear layers with ReLU between them, plus the optional dropout and
/// extra FC layer of the larger variants.
template <std::floating_point T>
struct ClassifierHead {
    HeadVariant variant = HeadVariant::Basic;
    double dropout_p = 0.0;
    LinearLayer<T> layer1;
    LinearLayer<T> layer2;
    LinearLayer<T> layer3;
    std::optional<LinearLayer<T>> extra;

    std::size_t num_classes() const noexcept { return layer3.out_dim(); }
};

/// The only trainable state of the model. Embeddings are inputs and fusion
/// slots carry no parameters.
template <std::floating_point T>
struct ModelParams {
    ImageAdapter<T> adapter;
    ClassifierHead<T> head;

    template <std::floating_point U>
    ModelParams<U> cast() const {
        ModelParams<U> out;
        out.adapter = adapter.template cast<U>();
        out.head.variant = head.variant;
        out.head.dropout_p = head.dropout_p;
        out.head.layer1 = head.layer1.template cast<U>();
        out.head.layer2 = head.layer2.template cast<U>();
        out.head.layer3 = head.layer3.template cast<U>();
        if (head.extra) out.head.extra = head.extra->template cast<U>();
        return out;
    }
};

template <std::floating_point T>
struct ParamSlot {
    std::string name;
    std::span<T> value;
    std::span<T> grad;
};

template <std::floating_point T>
std::vector<ParamSlot<T>> parameter_slots(ModelParams<T>& p) {
    std::vector<ParamSlot<T>> slots;
    slots.push_back({"adapter.kernel", p.adapter.kernel.values(), p.adapter.grad_kernel.values()});
    auto add_layer = [&slots](const std::string& name, LinearLayer<T>& l) {
        slots.push_back({name + ".weight", l.weight.values(), l.grad_weight.values()});
        slots.push_back({name + ".bias", l.bias.values(), l.grad_bias.values()});
    };
    add_layer("head.layer1", p.head.layer1);
    add_layer("head.layer2", p.head.layer2);
    if (p.head.extra) add_layer("head.extra", *p.head.extra);
    add_layer("head.layer3", p.head.layer3);
    return slots;
}

template <std::floating_point T>
void zero_grad(ModelParams<T>& p) {
    for (auto& s : parameter_slots(p)) std::fill(s.grad.begin(), s.grad.end(), T{0});
}

/// Views for the optimizer, in parameter_slots order.
std::vector<ParamView> optimizer_views(ModelParams<float>& params);

/// Allocates parameters for `plan` and draws them from the "init" substream.
ModelParams<float> init_model(const FusionPlan& plan, const HeadConfig& head,
                              std::uint64_t seed);

/// Throws ShapeError if the parameters were not built for `plan`.
template <std::floating_point T>
void require_compatible(const FusionPlan& plan, const ModelParams<T>& p) {
    require_dim(p.adapter.input_dim, plan.d_image_raw, "slot final: adapter input");
    require_dim(p.adapter.target_dim, plan.d_adapter, "slot final: adapter target");
    require_dim(p.head.layer1.in_dim(), plan.d_fused, "head layer1 input (fused dim)");
    require_dim(p.head.layer2.in_dim(), p.head.layer1.out_dim(), "head layer2 input");
    const std::size_t last = p.head.extra ? p.head.extra->out_dim() : p.head.layer2.out_dim();
    if (p.head.extra) require_dim(p.head.extra->in_dim(), p.head.layer2.out_dim(), "head extra input");
    require_dim(p.head.layer3.in_dim(), last, "head layer3 input");
    if ((p.head.variant == HeadVariant::WithMoreLayers) != p.head.extra.has_value()) {
        throw ShapeError("head variant and extra layer disagree");
    }
}

/// Per-sample model inputs after region pooling: the four text embeddings
/// and the region-averaged raw image vector.
template <std::floating_point T>
struct ModelInput {
    Vector<T> title_first;
    Vector<T> title_second;
    Vector<T> desc_first;
    Vector<T> desc_second;
    Vector<T> image;

    template <std::floating_point U>
    ModelInput<U> cast() const {
        return {title_first.template cast<U>(), title_second.template cast<U>(),
                desc_first.template cast<U>(), desc_second.template cast<U>(),
                image.template cast<U>()};
    }
};

/// One product: four text embeddings, the region stack and the label.
template <std::floating_point T>
struct ModalitySample {
    Vector<T> title_first;
    Vector<T> title_second;
    Vector<T> desc_first;
    Vector<T> desc_second;
    Matrix<T> regions;  // N_r x d_image_raw
    int label = 0;
};

template <std::floating_point T>
ModelInput<T> prepare_input(const ModalitySample<T>& s) {
    return {s.title_first, s.title_second, s.desc_first, s.desc_second, region_average(s.regions)};
}

/// Modalities, as bit flags for masking.
enum class Modality : unsigned {
    TitleFirst = 1u << 0,
    TitleSecond = 1u << 1,
    DescFirst = 1u << 2,
    DescSecond = 1u << 3,
    Image = 1u << 4,
};

/// Set of modalities whose embeddings are replaced by zeros.
class ModalityMask {
public:
    constexpr ModalityMask() = default;
    constexpr explicit ModalityMask(unsigned bits) : bits_(bits & 0x1Fu) {}

    static constexpr ModalityMask none() { return ModalityMask{0u}; }
    static constexpr ModalityMask all_text() { return ModalityMask{0x0Fu}; }
    static constexpr ModalityMask image() { return ModalityMask{0x10u}; }

    constexpr bool masks(Modality m) const { return (bits_ & static_cast<unsigned>(m)) != 0; }
    constexpr unsigned bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }

    friend constexpr bool operator==(ModalityMask, ModalityMask) = default;

private:
    unsigned bits_ = 0;
};

/// Parses "none", "text-only", "image-only", or a '+'-separated list of
/// masked modalities drawn from title_f, title_c, desc_f, desc_c, text, image.
ModalityMask parse_modality_mask(std::string_view text);
std::string to_string(ModalityMask mask);

template <std::floating_point T>
void apply_mask(ModelInput<T>& in, ModalityMask mask) {
    if (mask.masks(Modality::TitleFirst)) in.title_first.fill(T{0});
    if (mask.masks(Modality::TitleSecond)) in.title_second.fill(T{0});
    if (mask.masks(Modality::DescFirst)) in.desc_first.fill(T{0});
    if (mask.masks(Modality::DescSecond)) in.desc_second.fill(T{0});
    if (mask.masks(Modality::Image)) in.image.fill(T{0});
}

/// Intermediate values of one forward pass, kept for backward.
template <std::floating_point T>
struct ForwardTrace {
    ModelInput<T> input;
    Vector<T> branch_first;
    Vector<T> branch_second;
    Vector<T> text;
    AdapterTrace<T> adapter;
    Vector<T> image;
    Vector<T> fused;
    Vector<T> fusion_dropout_mask;  // WithDropout
    Vector<T> layer1_in;
    Vector<T> h1_pre;
    Vector<T> h1;
    Vector<T> h2_pre;
    Vector<T> h2;
    Vector<T> extra_dropout_mask;  // WithMoreLayers
    Vector<T> extra_in;
    Vector<T> extra_pre;
    Vector<T> layer3_in;
    Vector<T> logits;
    Vector<T> probs;
};

namespace detail {

template <std::floating_point T>
void require_inputs(const ModelInput<T>& in, const FusionPlan& plan) {
    require_dim(in.title_first.dim(), plan.d_text_first, "slot inner: title (first encoder)");
    require_dim(in.desc_first.dim(), plan.d_text_first, "slot inner: description (first encoder)");
    require_dim(in.title_second.dim(), plan.d_text_second, "slot inner: title (second encoder)");
    require_dim(in.desc_second.dim(), plan.d_text_second,
                "slot inner: description (second encoder)");
    require_dim(in.image.dim(), plan.d_image_raw, "slot final: image");
}

}  // namespace detail

/// Class probabilities for one sample:
///   f(Z_final(P, Z_outer(Z_inner(T_f, D_f), Z_inner(T_c, D_c)))),  P = adapter(image)
/// where f is layer1 -> ReLU -> layer2 -> ReLU -> layer3 -> softmax. WithDropout
/// applies dropout to the fused vector; WithMoreLayers inserts
/// dropout -> extra FC -> ReLU before layer3. `rng` feeds dropout and may be
/// null unless a dropout layer is active.
template <std::floating_point T>
Vector<T> model_forward(const ModelInput<T>& in, const FusionPlan& plan,
                        const ModelParams<T>& params, bool training, SeededRng* rng,
                        ForwardTrace<T>* trace = nullptr) {
    detail::require_inputs(in, plan);
    require_compatible(plan, params);
    const auto& head = params.head;

    ForwardTrace<T> local;
    ForwardTrace<T>& t = trace != nullptr ? *trace : local;

    t.branch_first = fuse(plan.inner_op, in.title_first, in.desc_first);
    t.branch_second = fuse(plan.inner_op, in.title_second, in.desc_second);
    t.text = fuse(plan.outer_op, t.branch_first, t.branch_second);
    t.image = adapter_forward(in.image, params.adapter, &t.adapter);
    t.fused = fuse(plan.final_op, t.image, t.text);

    if (head.variant == HeadVariant::WithDropout) {
        auto d = dropout(t.fused, head.dropout_p, training, rng);
        t.layer1_in = std::move(d.output);
        t.fusion_dropout_mask = std::move(d.mask);
    } else {
        t.layer1_in = t.fused;
    }
    t.h1_pre = linear_forward(t.layer1_in, head.layer1);
    t.h1 = relu(t.h1_pre);
    t.h2_pre = linear_forward(t.h1, head.layer2);
    t.h2 = relu(t.h2_pre);
    if (head.variant == HeadVariant::WithMoreLayers) {
        auto d = dropout(t.h2, head.dropout_p, training, rng);
        t.extra_in = std::move(d.output);
        t.extra_dropout_mask = std::move(d.mask);
        t.extra_pre = linear_forward(t.extra_in, *head.extra);
        t.layer3_in = relu(t.extra_pre);
    } else {
        t.layer3_in = t.h2;
    }
    t.logits = linear_forward(t.layer3_in, head.layer3);
    t.probs = softmax(t.logits);
    if (!all_finite<T>(t.probs.values())) throw NumericError("model_forward produced non-finite probabilities");
    if (trace != nullptr) t.input = in;
    return t.probs;
}

/// Gradients of the loss with respect to the model inputs (the frozen
/// embeddings). Only computed on request; training never uses them.
template <std::floating_point T>
struct InputGradients {
    Vector<T> title_first;
    Vector<T> title_second;
    Vector<T> desc_first;
    Vector<T> desc_second;
    Vector<T> image;
};

/// Accumulates `scale` times the gradient of cross_entropy(probs, target)
/// into the parameter gradient buffers.
template <std::floating_point T>
void model_backward(const ForwardTrace<T>& t, const FusionPlan& plan, ModelParams<T>& params,
                    int target, T scale, InputGradients<T>* input_grads = nullptr) {
    auto& head = params.head;
    Vector<T> g = softmax_cross_entropy_grad(t.probs, target);
    for (auto& v : g.values()) v *= scale;

    g = linear_backward(t.layer3_in, head.layer3, g);
    if (head.variant == HeadVariant::WithMoreLayers) {
        g = relu_backward(t.extra_pre, g);
        g = linear_backward(t.extra_in, *head.extra, g);
        g = dropout_backward(t.extra_dropout_mask, g);
    }
    g = relu_backward(t.h2_pre, g);
    g = linear_backward(t.h1, head.layer2, g);
    g = relu_backward(t.h1_pre, g);
    g = linear_backward(t.layer1_in, head.layer1, g);
    if (head.variant == HeadVariant::WithDropout) g = dropout_backward(t.fusion_dropout_mask, g);

    auto [g_image, g_text] = fuse_backward(plan.final_op, t.image.dim(), t.text.dim(), g);
    Vector<T> g_image_raw = adapter_backward(t.adapter, params.adapter, g_image);
    if (input_grads == nullptr) return;

    auto [g_first, g_second] =
        fuse_backward(plan.outer_op, t.branch_first.dim(), t.branch_second.dim(), g_text);
    auto [g_tf, g_df] = fuse_backward(plan.inner_op, plan.d_text_first, plan.d_text_first, g_first);
    auto [g_tc, g_dc] =
        fuse_backward(plan.inner_op, plan.d_text_second, plan.d_text_second, g_second);
    input_grads->title_first = std::move(g_tf);
    input_grads->desc_first = std::move(g_df);
    input_grads->title_second = std::move(g_tc);
    input_grads->desc_second = std::move(g_dc);
    input_grads->image = std::move(g_image_raw);
}

/// Fingerprint of the piecewise-linear regime of a forward pass: ReLU
/// activity and max-pool winners. Equal fingerprints mean the loss is
/// smooth between the two parameter points.
template <std::floating_point T>
std::uint64_t activation_pattern(const ForwardTrace<T>& t) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001B3ULL;
    };
    auto mix_relu = [&](const Vector<T>& pre) {
        for (std::size_t i = 0; i < pre.dim(); ++i) mix(pre[i] > T{0} ? 1 : 0);
    };
    mix_relu(t.h1_pre);
    mix_relu(t.h2_pre);
    mix_relu(t.extra_pre);
    for (auto w : t.adapter.winners) mix(w);
    return h;
}

}  // namespace hfusion
