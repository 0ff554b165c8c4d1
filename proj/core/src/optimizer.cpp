#include "hfusion/optimizer.hpp"

#include <cmath>

#include "hfusion/errors.hpp"

namespace hfusion {

std::string_view to_string(OptimizerKind kind) noexcept {
    return kind == OptimizerKind::Adam ? "adam" : "adamw";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
    if (text == "adam") return OptimizerKind::Adam;
    if (text == "adamw") return OptimizerKind::AdamW;
    throw ConfigError("unknown optimizer '" + std::string(text) + "' (expected adam or adamw)");
}

OptimizerConfig OptimizerConfig::adam(double lr) {
    OptimizerConfig c;
    c.kind = OptimizerKind::Adam;
    c.lr = lr;
    c.weight_decay = 0.0;
    return c;
}

OptimizerConfig OptimizerConfig::adamw(double lr) {
    OptimizerConfig c;
    c.kind = OptimizerKind::AdamW;
    c.lr = lr;
    c.weight_decay = 0.01;
    return c;
}

void OptimizerConfig::validate() const {
    if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must lie in [0, 1)");
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be non-negative");
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) { config_.validate(); }

void Optimizer::step(std::span<const ParamView> params) {
    if (t_ == 0 && m_.empty()) {
        m_.reserve(params.size());
        v_.reserve(params.size());
        for (const auto& p : params) {
            m_.emplace_back(p.value.size(), 0.0);
            v_.emplace_back(p.value.size(), 0.0);
        }
    }
    if (params.size() != m_.size()) {
        throw ShapeError("optimizer was created for " + std::to_string(m_.size()) +
                         " parameters, step received " + std::to_string(params.size()));
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto& p = params[k];
        if (p.value.size() != m_[k].size() || p.grad.size() != p.value.size()) {
            throw ShapeError("parameter '" + p.name + "' changed shape: expected " +
                             std::to_string(m_[k].size()) + " values, value has " +
                             std::to_string(p.value.size()) + ", grad has " +
                             std::to_string(p.grad.size()));
        }
    }

    ++t_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    const double wd = config_.weight_decay;
    const bool coupled_decay = config_.kind == OptimizerKind::Adam && wd != 0.0;
    const bool decoupled_decay = config_.kind == OptimizerKind::AdamW && wd != 0.0;

    for (std::size_t k = 0; k < params.size(); ++k) {
        auto value = params[k].value;
        auto grad = params[k].grad;
        auto& m = m_[k];
        auto& v = v_[k];
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double theta = value[i];
            double g = grad[i];
            if (coupled_decay) g += wd * theta;
            m[i] = b1 * m[i] + (1.0 - b1) * g;
            v[i] = b2 * v[i] + (1.0 - b2) * g * g;
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            double update = m_hat / (std::sqrt(v_hat) + config_.eps);
            if (decoupled_decay) update += wd * theta;
            value[i] = static_cast<float>(theta - config_.lr * update);
        }
    }
}

}  // namespace hfusion
