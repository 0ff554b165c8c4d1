#include "hfusion/fusion.hpp"

namespace hfusion {

std::string_view to_string(FusionOp op) noexcept {
    switch (op) {
        case FusionOp::Addition: return "add";
        case FusionOp::Concatenation: return "concat";
        case FusionOp::Average: return "avg";
    }
    return "?";
}

FusionOp parse_fusion_op(std::string_view text) {
    if (text == "add" || text == "addition") return FusionOp::Addition;
    if (text == "concat" || text == "concatenation") return FusionOp::Concatenation;
    if (text == "avg" || text == "average") return FusionOp::Average;
    throw ConfigError("unknown fusion operator '" + std::string(text) +
                      "' (expected add, concat or avg)");
}

std::size_t fused_dim(FusionOp op, std::size_t d1, std::size_t d2) {
    if (d1 == 0 || d2 == 0) throw ShapeError("fusion inputs must have positive dimension");
    if (op == FusionOp::Concatenation) return d1 + d2;
    if (d1 != d2) {
        throw ShapeError(std::string(to_string(op)) + " fusion needs equal dims, got " +
                         std::to_string(d1) + " and " + std::to_string(d2));
    }
    return d1;
}

namespace {

std::size_t slot_dim(const char* slot, FusionOp op, std::size_t d1, std::size_t d2) {
    try {
        return fused_dim(op, d1, d2);
    } catch (const ShapeError& e) {
        throw ShapeError(std::string("slot ") + slot + ": " + e.what());
    }
}

}  // namespace

FusionPlan build_plan(const PlanConfig& config) {
    if (config.d_text == 0) throw ConfigError("d_text must be positive");
    if (config.d_image_raw == 0) throw ConfigError("d_image_raw must be positive");

    FusionPlan plan;
    plan.inner_op = config.inner;
    plan.outer_op = config.outer;
    plan.final_op = config.final;
    plan.d_text_first = config.d_text;
    plan.d_text_second = config.d_text_second == 0 ? config.d_text : config.d_text_second;
    plan.d_image_raw = config.d_image_raw;

    plan.d_branch_first = slot_dim("inner", config.inner, plan.d_text_first, plan.d_text_first);
    plan.d_branch_second =
        slot_dim("inner", config.inner, plan.d_text_second, plan.d_text_second);
    plan.d_text_fused =
        slot_dim("outer", config.outer, plan.d_branch_first, plan.d_branch_second);

    plan.d_adapter =
        config.final == FusionOp::Concatenation ? plan.d_text_first : plan.d_text_fused;
    if (plan.d_image_raw < plan.d_adapter) {
        throw ConfigError("slot final: image dim " + std::to_string(plan.d_image_raw) +
                          " is smaller than the adapter target " +
                          std::to_string(plan.d_adapter));
    }
    plan.d_fused = slot_dim("final", config.final, plan.d_adapter, plan.d_text_fused);
    return plan;
}

PlanConfig plan_config_of(const FusionPlan& plan) {
    PlanConfig c;
    c.inner = plan.inner_op;
    c.outer = plan.outer_op;
    c.final = plan.final_op;
    c.d_text = plan.d_text_first;
    c.d_text_second = plan.d_text_second == plan.d_text_first ? 0 : plan.d_text_second;
    c.d_image_raw = plan.d_image_raw;
    return c;
}

}  // namespace hfusion
