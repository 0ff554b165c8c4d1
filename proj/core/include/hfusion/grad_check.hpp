#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hfusion {

/// Loss value at the current parameter point. `pattern` fingerprints the
/// piecewise-linear regime (ReLU masks, max-pool winners); closures without
/// kinks leave it at zero.
struct LossProbe {
    double loss = 0.0;
    std::uint64_t pattern = 0;
};

/// A block of coordinates to check: current values (perturbed in place and
/// restored) and the analytic gradient computed at those values.
struct GradBlock {
    std::string name;
    std::span<double> values;
    std::span<const double> analytic;
};

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    /// Coordinates where the +/- eps probes crossed a kink (pattern changed),
    /// so the central difference does not estimate a derivative.
    std::size_t skipped_nonsmooth = 0;
    std::string worst_block;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

/// Central-difference gradient check.
///
/// For every coordinate: n = (L(x+eps) - L(x-eps)) / (2 eps), compared with
/// the analytic value a by |a - n| / max(|a|, |n|, 1e-8). Returns the
/// maximum of that ratio. Throws NumericError if any probe is non-finite.
GradCheckResult grad_check(std::span<const GradBlock> blocks,
                           const std::function<LossProbe()>& loss,
                           double eps = 1e-3);

double relative_error(double analytic, double numeric) noexcept;

}  // namespace hfusion
