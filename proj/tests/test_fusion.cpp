#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "hfusion/fusion.hpp"
#include "hfusion/image.hpp"
#include "support.hpp"

namespace hfusion {
namespace {

constexpr int kCases = 1000;

TEST(Fuse, AdditionExample) {
    EXPECT_EQ(fuse(FusionOp::Addition, DenseVector{1, 2}, DenseVector{3, 4}), (DenseVector{4, 6}));
}

TEST(Fuse, AverageExample) {
    EXPECT_EQ(fuse(FusionOp::Average, DenseVector{1, 2}, DenseVector{3, 4}), (DenseVector{2, 3}));
}

TEST(Fuse, ConcatenationExample) {
    EXPECT_EQ(fuse(FusionOp::Concatenation, DenseVector{1, 2}, DenseVector{3, 4}),
              (DenseVector{1, 2, 3, 4}));
}

TEST(Fuse, MismatchedDimsAreShapeErrorsForElementwiseOps) {
    EXPECT_THROW(fuse(FusionOp::Addition, DenseVector{1, 2}, DenseVector{3}), ShapeError);
    EXPECT_THROW(fuse(FusionOp::Average, DenseVector{1}, DenseVector{3, 4}), ShapeError);
    EXPECT_EQ(fuse(FusionOp::Concatenation, DenseVector{1}, DenseVector{3, 4}).dim(), 3u);
}

TEST(FusedDim, Table) {
    EXPECT_EQ(fused_dim(FusionOp::Concatenation, 8, 8), 16u);
    EXPECT_EQ(fused_dim(FusionOp::Average, 8, 8), 8u);
    EXPECT_EQ(fused_dim(FusionOp::Addition, 8, 8), 8u);
    EXPECT_THROW(fused_dim(FusionOp::Addition, 8, 9), ShapeError);
    EXPECT_THROW(fused_dim(FusionOp::Average, 8, 9), ShapeError);
    EXPECT_EQ(fused_dim(FusionOp::Concatenation, 8, 9), 17u);
}

TEST(FusedDim, MatchesFuseOutputOverRandomDims) {
    SeededRng rng(1, "fd");
    for (int c = 0; c < kCases; ++c) {
        const std::size_t d1 = 1 + rng.below(20);
        const std::size_t d2 = rng.bernoulli(0.5) ? d1 : 1 + rng.below(20);
        const auto x1 = test::random_vector(rng, d1);
        const auto x2 = test::random_vector(rng, d2);
        for (FusionOp op : kAllFusionOps) {
            if (op != FusionOp::Concatenation && d1 != d2) {
                EXPECT_THROW(fused_dim(op, d1, d2), ShapeError);
                continue;
            }
            EXPECT_EQ(fuse(op, x1, x2).dim(), fused_dim(op, d1, d2));
        }
    }
}

TEST(FuseProperty, AdditionAndAverageCommuteBitwise) {
    SeededRng rng(2, "comm");
    for (int c = 0; c < kCases; ++c) {
        const std::size_t d = 1 + rng.below(64);
        const auto a = test::random_vector(rng, d, 100.0);
        const auto b = test::random_vector(rng, d, 100.0);
        for (FusionOp op : {FusionOp::Addition, FusionOp::Average}) {
            const auto ab = fuse(op, a, b);
            const auto ba = fuse(op, b, a);
            ASSERT_EQ(std::memcmp(ab.values().data(), ba.values().data(), d * sizeof(float)), 0);
        }
    }
}

TEST(FuseProperty, AverageIsHalfOfAddition) {
    SeededRng rng(3, "avg");
    for (int c = 0; c < kCases; ++c) {
        const std::size_t d = 1 + rng.below(64);
        const auto a = test::random_vector(rng, d, 10.0);
        const auto b = test::random_vector(rng, d, 10.0);
        const auto avg = fuse(FusionOp::Average, a, b);
        const auto add = fuse(FusionOp::Addition, a, b);
        for (std::size_t i = 0; i < d; ++i) {
            const double half = 0.5 * static_cast<double>(add[i]);
            ASSERT_LE(std::abs(avg[i] - half), 1e-7 * std::max(1.0, std::abs(half)));
        }
    }
}

TEST(FuseProperty, ConcatenationKeepsPositions) {
    SeededRng rng(4, "cat");
    for (int c = 0; c < kCases; ++c) {
        const std::size_t d1 = 1 + rng.below(32);
        const std::size_t d2 = 1 + rng.below(32);
        const auto a = test::random_vector(rng, d1);
        const auto b = test::random_vector(rng, d2);
        const auto y = fuse(FusionOp::Concatenation, a, b);
        ASSERT_EQ(y.dim(), d1 + d2);
        for (std::size_t i = 0; i < d1; ++i) ASSERT_EQ(y[i], a[i]);
        for (std::size_t i = 0; i < d2; ++i) ASSERT_EQ(y[d1 + i], b[i]);
    }
}

TEST(FuseBackward, DistributesGradient) {
    const DenseVector g{2, 4};
    auto [a1, a2] = fuse_backward(FusionOp::Addition, 2, 2, g);
    EXPECT_EQ(a1, g);
    EXPECT_EQ(a2, g);
    auto [m1, m2] = fuse_backward(FusionOp::Average, 2, 2, g);
    EXPECT_EQ(m1, (DenseVector{1, 2}));
    EXPECT_EQ(m2, (DenseVector{1, 2}));
    auto [c1, c2] = fuse_backward(FusionOp::Concatenation, 1, 3, DenseVector{1, 2, 3, 4});
    EXPECT_EQ(c1, (DenseVector{1}));
    EXPECT_EQ(c2, (DenseVector{2, 3, 4}));
    EXPECT_THROW(fuse_backward(FusionOp::Concatenation, 1, 2, g), ShapeError);
}

TEST(FuseBackward, IsTheAdjointOfFuse) {
    // <fuse(x1, x2), g> == <x1, g1> + <x2, g2> for every linear fusion.
    SeededRng rng(5, "adj");
    for (int c = 0; c < kCases; ++c) {
        const std::size_t d = 1 + rng.below(16);
        const auto x1 = test::random_vector<double>(rng, d);
        const auto x2 = test::random_vector<double>(rng, d);
        for (FusionOp op : kAllFusionOps) {
            const auto y = fuse(op, x1, x2);
            const auto g = test::random_vector<double>(rng, y.dim());
            auto [g1, g2] = fuse_backward(op, d, d, g);
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t i = 0; i < y.dim(); ++i) lhs += y[i] * g[i];
            for (std::size_t i = 0; i < d; ++i) rhs += x1[i] * g1[i] + x2[i] * g2[i];
            ASSERT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST(FusionOpNames, RoundTrip) {
    for (FusionOp op : kAllFusionOps) EXPECT_EQ(parse_fusion_op(to_string(op)), op);
    EXPECT_EQ(parse_fusion_op("average"), FusionOp::Average);
    EXPECT_EQ(parse_fusion_op("concatenation"), FusionOp::Concatenation);
    EXPECT_EQ(parse_fusion_op("addition"), FusionOp::Addition);
    EXPECT_THROW(parse_fusion_op("mul"), ConfigError);
}

TEST(RegionAverage, IdenticalRowsReturnTheRow) {
    EXPECT_EQ(region_average(DenseMatrix{{1.5f, -2, 3}, {1.5f, -2, 3}}), (DenseVector{1.5f, -2, 3}));
}

TEST(RegionAverage, TwoRowExample) {
    EXPECT_EQ(region_average(DenseMatrix{{0, 0}, {2, 4}}), (DenseVector{1, 2}));
}

TEST(RegionAverage, EmptyStackIsShapeError) {
    EXPECT_THROW(region_average(DenseMatrix(0, 4)), ShapeError);
}

TEST(RegionAverage, MatchesBruteForceMean) {
    SeededRng rng(6, "ra");
    DenseMatrix stack(256, 16);
    for (auto& v : stack.values()) v = static_cast<float>(rng.normal());
    const auto avg = region_average(stack);
    for (std::size_t j = 0; j < 16; ++j) {
        long double s = 0;
        for (std::size_t i = 0; i < 256; ++i) s += stack(i, j);
        EXPECT_NEAR(avg[j], static_cast<double>(s / 256), 1e-6);
    }
}

TEST(RegionAverageProperty, RowPermutationInvariance) {
    SeededRng rng(7, "perm");
    for (int c = 0; c < kCases; ++c) {
        const std::size_t rows = 1 + rng.below(64);
        const std::size_t cols = 1 + rng.below(16);
        DenseMatrix stack(rows, cols);
        for (auto& v : stack.values()) v = static_cast<float>(rng.normal() * 10.0);
        std::vector<std::size_t> order(rows);
        for (std::size_t i = 0; i < rows; ++i) order[i] = i;
        rng.shuffle(std::span<std::size_t>(order));
        DenseMatrix permuted(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            std::copy(stack.row(order[i]).begin(), stack.row(order[i]).end(),
                      permuted.row(i).begin());
        }
        const auto a = region_average(stack);
        const auto b = region_average(permuted);
        for (std::size_t j = 0; j < cols; ++j) {
            ASSERT_LE(std::abs(a[j] - b[j]), 1e-6 * std::max(1.0f, std::abs(a[j])));
        }
    }
}

TEST(BuildPlan, AverageEverywhereAt768) {
    PlanConfig c;
    c.inner = c.outer = c.final = FusionOp::Average;
    c.d_text = 768;
    c.d_image_raw = 2048;
    const auto p = build_plan(c);
    EXPECT_EQ(p.d_fused, 768u);
    EXPECT_EQ(p.d_adapter, 768u);
    EXPECT_EQ(p.d_text_fused, 768u);
}

TEST(BuildPlan, ConcatConcatAverageNeedsWideImage) {
    PlanConfig c;
    c.inner = c.outer = FusionOp::Concatenation;
    c.final = FusionOp::Average;
    c.d_text = 768;
    c.d_image_raw = 4096;
    const auto p = build_plan(c);
    EXPECT_EQ(p.d_branch_first, 1536u);
    EXPECT_EQ(p.d_text_fused, 3072u);
    EXPECT_EQ(p.d_adapter, 3072u);
    EXPECT_EQ(p.d_fused, 3072u);

    c.d_image_raw = 2048;
    try {
        build_plan(c);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("final"), std::string::npos) << e.what();
    }
}

TEST(BuildPlan, ConcatenationAtFinalUsesTextDimForAdapter) {
    PlanConfig c;
    c.inner = c.outer = FusionOp::Concatenation;
    c.final = FusionOp::Concatenation;
    c.d_text = 8;
    c.d_image_raw = 32;
    const auto p = build_plan(c);
    EXPECT_EQ(p.d_adapter, 8u);
    EXPECT_EQ(p.d_text_fused, 32u);
    EXPECT_EQ(p.d_fused, 40u);
}

TEST(BuildPlan, FusedDimMatchesBruteForceOverAllCombinations) {
    for (FusionOp inner : kAllFusionOps) {
        for (FusionOp outer : kAllFusionOps) {
            for (FusionOp fin : kAllFusionOps) {
                PlanConfig c{inner, outer, fin, 8, 0, 64};
                const auto p = build_plan(c);
                const std::size_t branch = inner == FusionOp::Concatenation ? 16 : 8;
                const std::size_t text = outer == FusionOp::Concatenation ? 2 * branch : branch;
                const std::size_t adapter = fin == FusionOp::Concatenation ? 8 : text;
                const std::size_t fused = fin == FusionOp::Concatenation ? adapter + text : text;
                EXPECT_EQ(p.d_text_fused, text);
                EXPECT_EQ(p.d_adapter, adapter);
                EXPECT_EQ(p.d_fused, fused);
            }
        }
    }
}

TEST(BuildPlan, OuterAdditionOverMismatchedBranchesNamesTheSlot) {
    PlanConfig c{FusionOp::Concatenation, FusionOp::Addition, FusionOp::Concatenation, 8, 6, 64};
    try {
        build_plan(c);
        FAIL() << "expected ShapeError";
    } catch (const ShapeError& e) {
        EXPECT_NE(std::string(e.what()).find("outer"), std::string::npos) << e.what();
    }
    c.outer = FusionOp::Concatenation;
    EXPECT_EQ(build_plan(c).d_text_fused, 28u);
}

TEST(BuildPlan, ZeroDimsAreRejected) {
    EXPECT_ANY_THROW(build_plan(PlanConfig{FusionOp::Average, FusionOp::Average,
                                           FusionOp::Average, 0, 0, 8}));
    EXPECT_ANY_THROW(build_plan(PlanConfig{FusionOp::Average, FusionOp::Average,
                                           FusionOp::Average, 8, 0, 0}));
}

TEST(BuildPlan, RoundTripsThroughConfig) {
    PlanConfig c{FusionOp::Addition, FusionOp::Concatenation, FusionOp::Average, 8, 0, 64};
    const auto p = build_plan(c);
    EXPECT_EQ(build_plan(plan_config_of(p)), p);
}

}  // namespace
}  // namespace hfusion
