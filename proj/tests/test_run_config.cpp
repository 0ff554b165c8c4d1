#include <gtest/gtest.h>

#include "hfusion/errors.hpp"
#include "run_config.hpp"
#include "support.hpp"

namespace hfusion::cli {
namespace {

TEST(RunConfig, Defaults) {
    const RunConfig c;
    const auto t = c.train_config();
    EXPECT_EQ(t.epochs, 20u);
    EXPECT_EQ(t.batch_size, 32u);
    EXPECT_EQ(t.optimizer.kind, OptimizerKind::Adam);
    EXPECT_DOUBLE_EQ(t.optimizer.lr, 1e-3);
    EXPECT_EQ(t.plan.inner, FusionOp::Average);
    EXPECT_TRUE(t.mask.empty());
}

TEST(RunConfig, AdamWPresetAndOverrides) {
    RunConfig c;
    c.set("train", "optimizer", "adamw");
    auto o = c.optimizer_config();
    EXPECT_DOUBLE_EQ(o.lr, 2e-5);
    EXPECT_DOUBLE_EQ(o.weight_decay, 0.01);
    c.set("train", "lr", "0.5");
    c.set("train", "weight_decay", "0");
    o = c.optimizer_config();
    EXPECT_DOUBLE_EQ(o.lr, 0.5);
    EXPECT_DOUBLE_EQ(o.weight_decay, 0.0);
}

TEST(RunConfig, FileEntriesApply) {
    RunConfig c;
    apply_config_text(c,
                      "seed = 9\n"
                      "[plan]\ninner = concat\nd_text = 64\n"
                      "[head]\nvariant = more-layers\nhidden1 = 10\n"
                      "[train]\nepochs = 3\nmask = text-only\n"
                      "[synth]\nsigma = 0.25\n",
                      "test.cfg");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.plan.inner, FusionOp::Concatenation);
    EXPECT_EQ(c.plan.d_text, 64u);
    EXPECT_EQ(c.head.variant, HeadVariant::WithMoreLayers);
    EXPECT_EQ(c.head.hidden1, 10u);
    EXPECT_EQ(c.epochs, 3u);
    EXPECT_EQ(c.mask, ModalityMask::image());
    EXPECT_DOUBLE_EQ(c.synth.noise_sigma, 0.25);
}

TEST(RunConfig, UnknownKeysAndBadValuesAreRejected) {
    RunConfig c;
    EXPECT_THROW(c.set("train", "epoch", "3"), ConfigError);
    EXPECT_THROW(c.set("", "sed", "3"), ConfigError);
    EXPECT_THROW(c.set("nope", "x", "1"), ConfigError);
    EXPECT_THROW(c.set("train", "epochs", "three"), ConfigError);
    EXPECT_THROW(c.set("plan", "inner", "multiply"), ConfigError);
    try {
        apply_config_text(c, "[train]\n\nbogus = 1\n", "x.cfg");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("x.cfg:3"), std::string::npos) << e.what();
    }
}

TEST(RunConfig, InvalidTrainingValuesFailValidation) {
    RunConfig c;
    c.set("train", "epochs", "0");
    EXPECT_THROW(c.train_config(), ConfigError);
    c = RunConfig{};
    c.set("train", "lr", "-1");
    EXPECT_THROW(c.train_config(), ConfigError);
}

TEST(RunConfig, MissingFileIsAConfigError) {
    test::TempDir dir;
    RunConfig c;
    EXPECT_THROW(apply_config_file(c, dir / "none.cfg"), ConfigError);
}

}  // namespace
}  // namespace hfusion::cli
