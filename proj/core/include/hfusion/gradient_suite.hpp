#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hfusion/fusion.hpp"
#include "hfusion/grad_check.hpp"
#include "hfusion/model.hpp"

namespace hfusion {

/// Settings for the full-model finite-difference check. Head widths are kept
/// small so every coordinate can be probed.
struct GradientSuiteConfig {
    std::uint64_t seed = 7;
    std::size_t d_text = 8;
    std::size_t d_image_raw = 32;
    std::size_t num_classes = 3;
    std::size_t hidden1 = 32;
    std::size_t hidden2 = 16;
    std::size_t extra = 16;
    /// Batch-mean losses can cancel to gradients near the finite-difference
    /// truncation error, so single samples are checked by default.
    std::size_t batch = 1;
    double eps = 1e-3;
    double tolerance = 1e-4;
};

struct GradientCase {
    FusionOp inner = FusionOp::Addition;
    FusionOp outer = FusionOp::Addition;
    FusionOp final_op = FusionOp::Addition;
    HeadVariant variant = HeadVariant::Basic;
};

struct GradientCaseResult {
    GradientCase which;
    GradCheckResult check;
    bool passed = false;
};

/// inner == outer crossed with every final operator and head variant (27 cases).
std::vector<GradientCase> gradient_suite_cases();

/// Checks parameters and input embeddings of one case on a small batch of
/// random inputs. Dropout masks are drawn once and held fixed across probes.
GradientCaseResult run_gradient_case(const GradientSuiteConfig& config, const GradientCase& which);

std::vector<GradientCaseResult> run_gradient_suite(const GradientSuiteConfig& config);

}  // namespace hfusion
