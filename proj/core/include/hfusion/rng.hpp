#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace hfusion {

/// Deterministic random stream keyed by (master seed, substream label).
///
/// The generator is splitmix64. Its starting state mixes the master seed
/// with an FNV-1a hash of the label, so "init", "shuffle:3" and
/// "dropout:fusion:17" never share a stream. Only integer arithmetic feeds
/// the bit stream; floating point draws are derived from it with fixed
/// formulas, so identical (seed, label) pairs replay identically.
class SeededRng {
public:
    SeededRng(std::uint64_t master_seed, std::string_view label);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    const std::string& label() const noexcept { return label_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Unbiased (rejection sampling). n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    /// Standard normal draw (Box-Muller, pairs cached).
    double normal() noexcept;

    /// True with probability p.
    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Fisher-Yates, walking from the back.
    template <class T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t master_seed_;
    std::string label_;
    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(std::string_view text) noexcept;

}  // namespace hfusion
