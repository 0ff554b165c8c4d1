#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hfusion {

enum class OptimizerKind { Adam, AdamW };

std::string_view to_string(OptimizerKind kind) noexcept;
OptimizerKind parse_optimizer_kind(std::string_view text);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;

    /// Adam, lr 1e-3, no weight decay.
    static OptimizerConfig adam(double lr = 1e-3);
    /// AdamW, lr 2e-5, decoupled weight decay 0.01.
    static OptimizerConfig adamw(double lr = 2e-5);

    void validate() const;
};

/// One trainable tensor as seen by the optimizer.
struct ParamView {
    std::string name;
    std::span<float> value;
    std::span<const float> grad;
};

/// Adam / AdamW with bias-corrected moments.
///
/// Adam folds weight decay into the gradient; AdamW applies it to the
/// parameter directly. With weight_decay == 0 neither branch executes, so the
/// two kinds take the same arithmetic path and agree bitwise.
class Optimizer {
public:
    explicit Optimizer(OptimizerConfig config);

    /// Applies one update to every parameter. The parameter list (count and
    /// sizes) is captured on the first call and must not change afterwards.
    void step(std::span<const ParamView> params);

    std::uint64_t steps() const noexcept { return t_; }
    const OptimizerConfig& config() const noexcept { return config_; }

private:
    OptimizerConfig config_;
    std::uint64_t t_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

}  // namespace hfusion
