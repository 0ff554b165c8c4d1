#include "hfusion/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "hfusion/errors.hpp"

namespace hfusion {
namespace {

LossProbe checked_probe(const std::function<LossProbe()>& loss, const std::string& where) {
    LossProbe p = loss();
    if (!std::isfinite(p.loss)) {
        throw NumericError("grad_check: non-finite loss " + std::to_string(p.loss) + " " + where);
    }
    return p;
}

}  // namespace

double relative_error(double analytic, double numeric) noexcept {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    return std::abs(analytic - numeric) / denom;
}

GradCheckResult grad_check(std::span<const GradBlock> blocks,
                           const std::function<LossProbe()>& loss, double eps) {
    if (!(eps > 0.0)) throw ConfigError("grad_check eps must be positive");
    GradCheckResult result;
    bool any = false;
    for (const auto& b : blocks) any = any || !b.values.empty();
    if (!any) return result;

    const LossProbe base = checked_probe(loss, "at the unperturbed point");
    for (const auto& block : blocks) {
        if (block.analytic.size() != block.values.size()) {
            throw ShapeError("grad_check block '" + block.name + "' has " +
                             std::to_string(block.values.size()) + " values but " +
                             std::to_string(block.analytic.size()) + " gradients");
        }
        for (std::size_t i = 0; i < block.values.size(); ++i) {
            const double saved = block.values[i];
            const std::string where = "perturbing " + block.name + "[" + std::to_string(i) + "]";
            block.values[i] = saved + eps;
            const LossProbe plus = checked_probe(loss, where);
            block.values[i] = saved - eps;
            const LossProbe minus = checked_probe(loss, where);
            block.values[i] = saved;

            if (plus.pattern != base.pattern || minus.pattern != base.pattern) {
                ++result.skipped_nonsmooth;
                continue;
            }
            const double numeric = (plus.loss - minus.loss) / (2.0 * eps);
            const double analytic = block.analytic[i];
            const double err = relative_error(analytic, numeric);
            ++result.checked;
            if (result.checked == 1 || err > result.max_rel_error) {
                result.max_rel_error = err;
                result.worst_block = block.name;
                result.worst_index = i;
                result.worst_analytic = analytic;
                result.worst_numeric = numeric;
            }
        }
    }
    return result;
}

}  // namespace hfusion
