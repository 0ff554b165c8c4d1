#include <cmath>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "hfusion/errors.hpp"
#include "hfusion/optimizer.hpp"
#include "hfusion/rng.hpp"

namespace hfusion {
namespace {

struct Param {
    std::vector<float> value;
    std::vector<float> grad;
};

std::vector<ParamView> views(std::vector<Param>& ps) {
    std::vector<ParamView> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        out.push_back({"p" + std::to_string(i), ps[i].value, ps[i].grad});
    }
    return out;
}

TEST(Optimizer, ZeroGradientWithoutDecayLeavesParametersUnchanged) {
    for (auto cfg : {OptimizerConfig::adam(), OptimizerConfig::adamw()}) {
        cfg.weight_decay = 0.0;
        std::vector<Param> ps{{{1.5f, -2.0f, 0.0f}, {0, 0, 0}}};
        Optimizer opt(cfg);
        for (int i = 0; i < 5; ++i) opt.step(views(ps));
        EXPECT_EQ(ps[0].value, (std::vector<float>{1.5f, -2.0f, 0.0f}));
    }
}

TEST(Optimizer, FirstStepClosedForm) {
    // t = 1: m_hat = g and v_hat = g^2, so the step is lr * g / (|g| + eps).
    std::vector<Param> ps{{{1.0f}, {1.0f}}};
    Optimizer opt(OptimizerConfig::adam(1e-3));
    opt.step(views(ps));
    const double expected = 1.0 - 1e-3 * (1.0 / (1.0 + 1e-8));
    EXPECT_EQ(ps[0].value[0], static_cast<float>(expected));
    EXPECT_EQ(opt.steps(), 1u);
}

TEST(Optimizer, AdamAndAdamWAgreeBitwiseWithoutDecay) {
    SeededRng rng(12, "opt");
    auto adamw = OptimizerConfig::adamw(1e-3);
    adamw.weight_decay = 0.0;
    std::vector<Param> a{{std::vector<float>(40), std::vector<float>(40)},
                         {std::vector<float>(7), std::vector<float>(7)}};
    for (auto& p : a) {
        for (auto& v : p.value) v = static_cast<float>(rng.normal());
    }
    auto b = a;
    Optimizer oa(OptimizerConfig::adam(1e-3));
    Optimizer ob(adamw);
    for (int step = 0; step < 200; ++step) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t i = 0; i < a[k].grad.size(); ++i) {
                a[k].grad[i] = b[k].grad[i] = static_cast<float>(rng.normal());
            }
        }
        oa.step(views(a));
        ob.step(views(b));
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        ASSERT_EQ(std::memcmp(a[k].value.data(), b[k].value.data(), a[k].value.size() * 4), 0);
    }
}

// Straightforward textbook Adam/AdamW on one scalar, in double.
struct ReferenceAdam {
    bool decoupled;
    double lr, b1 = 0.9, b2 = 0.999, eps = 1e-8, wd;
    double m = 0, v = 0;
    int t = 0;

    double step(double theta, double g) {
        ++t;
        if (!decoupled) g += wd * theta;
        m = b1 * m + (1 - b1) * g;
        v = b2 * v + (1 - b2) * g * g;
        const double mh = m / (1 - std::pow(b1, t));
        const double vh = v / (1 - std::pow(b2, t));
        double u = mh / (std::sqrt(vh) + eps);
        if (decoupled) u += wd * theta;
        return theta - lr * u;
    }
};

TEST(Optimizer, TracksReferenceImplementation) {
    for (bool decoupled : {false, true}) {
        SeededRng rng(decoupled ? 2 : 1, "ref");
        auto cfg = decoupled ? OptimizerConfig::adamw(1e-2) : OptimizerConfig::adam(1e-2);
        cfg.weight_decay = 0.05;
        ReferenceAdam ref{decoupled, 1e-2, 0.9, 0.999, 1e-8, 0.05};
        std::vector<Param> ps{{{0.7f}, {0.0f}}};
        Optimizer opt(cfg);
        double theta = 0.7;
        for (int step = 0; step < 300; ++step) {
            const double g = rng.normal() + 0.3 * ps[0].value[0];
            ps[0].grad[0] = static_cast<float>(g);
            theta = ref.step(ps[0].value[0], static_cast<float>(g));
            opt.step(views(ps));
            ASSERT_NEAR(ps[0].value[0], theta, 1e-6) << "step " << step;
        }
    }
}

TEST(Optimizer, AdamWDecayIsDecoupledFromMoments) {
    // Zero gradient: Adam sees g = wd * theta and moves by about lr; AdamW
    // only shrinks theta by lr * wd * theta.
    std::vector<Param> w{{{1.0f}, {0.0f}}};
    Optimizer adamw(OptimizerConfig::adamw(1e-3));
    adamw.step(views(w));
    EXPECT_EQ(w[0].value[0], static_cast<float>(1.0 - 1e-3 * 0.01));

    auto cfg = OptimizerConfig::adam(1e-3);
    cfg.weight_decay = 0.01;
    std::vector<Param> a{{{1.0f}, {0.0f}}};
    Optimizer adam(cfg);
    adam.step(views(a));
    EXPECT_NEAR(a[0].value[0], 1.0 - 1e-3, 1e-6);
}

TEST(Optimizer, StepCounterIncrementsByOne) {
    std::vector<Param> ps{{{1.0f}, {0.5f}}};
    Optimizer opt(OptimizerConfig::adam());
    for (std::uint64_t i = 1; i <= 10; ++i) {
        opt.step(views(ps));
        EXPECT_EQ(opt.steps(), i);
    }
}

TEST(Optimizer, ShapeChangeIsRejected) {
    std::vector<Param> ps{{{1.0f, 2.0f}, {0.5f, 0.5f}}};
    Optimizer opt(OptimizerConfig::adam());
    opt.step(views(ps));
    std::vector<Param> grown{{{1.0f, 2.0f, 3.0f}, {0.5f, 0.5f, 0.5f}}};
    EXPECT_THROW(opt.step(views(grown)), ShapeError);
    std::vector<Param> more{ps[0], ps[0]};
    EXPECT_THROW(opt.step(views(more)), ShapeError);
    std::vector<Param> bad_grad{{{1.0f, 2.0f}, {0.5f}}};
    EXPECT_THROW(opt.step(views(bad_grad)), ShapeError);
    EXPECT_EQ(opt.steps(), 1u);
}

TEST(OptimizerConfig, Presets) {
    const auto a = OptimizerConfig::adam();
    EXPECT_EQ(a.kind, OptimizerKind::Adam);
    EXPECT_EQ(a.lr, 1e-3);
    EXPECT_EQ(a.weight_decay, 0.0);
    const auto w = OptimizerConfig::adamw();
    EXPECT_EQ(w.kind, OptimizerKind::AdamW);
    EXPECT_EQ(w.lr, 2e-5);
    EXPECT_EQ(w.weight_decay, 0.01);
    EXPECT_EQ(w.beta1, 0.9);
    EXPECT_EQ(w.beta2, 0.999);
    EXPECT_EQ(w.eps, 1e-8);
}

TEST(OptimizerConfig, RejectsInvalidValues) {
    auto c = OptimizerConfig::adam();
    c.lr = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = OptimizerConfig::adam();
    c.beta1 = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = OptimizerConfig::adam();
    c.weight_decay = -1;
    EXPECT_THROW(Optimizer{c}, ConfigError);
}

TEST(OptimizerConfig, ParsesKinds) {
    EXPECT_EQ(parse_optimizer_kind("adam"), OptimizerKind::Adam);
    EXPECT_EQ(parse_optimizer_kind("adamw"), OptimizerKind::AdamW);
    EXPECT_THROW(parse_optimizer_kind("sgd"), ConfigError);
    EXPECT_EQ(to_string(OptimizerKind::AdamW), "adamw");
}

}  // namespace
}  // namespace hfusion
