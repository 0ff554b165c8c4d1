#include "hfusion/gradient_suite.hpp"

#include <string>

namespace hfusion {

std::vector<GradientCase> gradient_suite_cases() {
    std::vector<GradientCase> cases;
    for (FusionOp slot : kAllFusionOps) {
        for (FusionOp final_op : kAllFusionOps) {
            for (HeadVariant v : kAllHeadVariants) cases.push_back({slot, slot, final_op, v});
        }
    }
    return cases;
}

namespace {

Vector<double> random_vector(SeededRng& rng, std::size_t n) {
    Vector<double> v(n);
    for (auto& x : v.values()) x = rng.normal();
    return v;
}

std::string case_label(const GradientCase& c) {
    return std::string(to_string(c.inner)) + "/" + std::string(to_string(c.outer)) + "/" +
           std::string(to_string(c.final_op)) + "/" + std::string(to_string(c.variant));
}

}  // namespace

GradientCaseResult run_gradient_case(const GradientSuiteConfig& config, const GradientCase& which) {
    PlanConfig pc;
    pc.inner = which.inner;
    pc.outer = which.outer;
    pc.final = which.final_op;
    pc.d_text = config.d_text;
    pc.d_image_raw = config.d_image_raw;
    const FusionPlan plan = build_plan(pc);

    HeadConfig hc;
    hc.variant = which.variant;
    hc.num_classes = config.num_classes;
    hc.hidden1 = config.hidden1;
    hc.hidden2 = config.hidden2;
    hc.extra = config.extra;
    ModelParams<double> params = init_model(plan, hc, config.seed).cast<double>();

    const std::string label = case_label(which);
    SeededRng data_rng(config.seed, "gradcheck:" + label);
    std::vector<ModelInput<double>> inputs(config.batch);
    std::vector<int> targets(config.batch);
    for (std::size_t i = 0; i < config.batch; ++i) {
        auto& in = inputs[i];
        in.title_first = random_vector(data_rng, config.d_text);
        in.title_second = random_vector(data_rng, config.d_text);
        in.desc_first = random_vector(data_rng, config.d_text);
        in.desc_second = random_vector(data_rng, config.d_text);
        in.image = random_vector(data_rng, config.d_image_raw);
        targets[i] = static_cast<int>(data_rng.below(config.num_classes));
    }

    const bool training = which.variant != HeadVariant::Basic;
    const double scale = 1.0 / static_cast<double>(config.batch);
    auto dropout_rng = [&](std::size_t i) {
        return SeededRng(config.seed, "dropout:" + std::string(dropout_layer_name(which.variant)) +
                                          ":" + std::to_string(i));
    };

    auto loss = [&]() {
        LossProbe probe;
        ForwardTrace<double> trace;
        for (std::size_t i = 0; i < config.batch; ++i) {
            SeededRng rng = dropout_rng(i);
            const auto probs = model_forward(inputs[i], plan, params, training, &rng, &trace);
            probe.loss += scale * cross_entropy(probs, targets[i]);
            probe.pattern = probe.pattern * 0x9E3779B97F4A7C15ULL + activation_pattern(trace);
        }
        return probe;
    };

    zero_grad(params);
    std::vector<InputGradients<double>> input_grads(config.batch);
    for (std::size_t i = 0; i < config.batch; ++i) {
        SeededRng rng = dropout_rng(i);
        ForwardTrace<double> trace;
        model_forward(inputs[i], plan, params, training, &rng, &trace);
        model_backward(trace, plan, params, targets[i], scale, &input_grads[i]);
    }

    std::vector<GradBlock> blocks;
    for (auto& slot : parameter_slots(params)) blocks.push_back({slot.name, slot.value, slot.grad});
    for (std::size_t i = 0; i < config.batch; ++i) {
        const std::string p = "input" + std::to_string(i) + ".";
        auto& in = inputs[i];
        auto& g = input_grads[i];
        blocks.push_back({p + "title_first", in.title_first.values(), g.title_first.values()});
        blocks.push_back({p + "title_second", in.title_second.values(), g.title_second.values()});
        blocks.push_back({p + "desc_first", in.desc_first.values(), g.desc_first.values()});
        blocks.push_back({p + "desc_second", in.desc_second.values(), g.desc_second.values()});
        blocks.push_back({p + "image", in.image.values(), g.image.values()});
    }

    GradientCaseResult out;
    out.which = which;
    out.check = grad_check(blocks, loss, config.eps);
    out.passed = out.check.max_rel_error < config.tolerance;
    return out;
}

std::vector<GradientCaseResult> run_gradient_suite(const GradientSuiteConfig& config) {
    std::vector<GradientCaseResult> results;
    for (const auto& c : gradient_suite_cases()) results.push_back(run_gradient_case(config, c));
    return results;
}

}  // namespace hfusion
