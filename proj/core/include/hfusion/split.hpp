#pragma once

#include <cstddef>
#include <cstdint>

#include "hfusion/dataset.hpp"

namespace hfusion {

struct SplitCounts {
    std::size_t test = 0;
    std::size_t val = 0;
    std::size_t train = 0;

    friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

inline constexpr double kValidationFraction = 0.1;

/// Per-class counts: round(n * test_fraction) to test, then
/// round(remaining * val_fraction) to validation, the rest to train.
/// Rounding is half away from zero.
SplitCounts split_counts(std::size_t n, double test_fraction,
                         double val_fraction = kValidationFraction);

/// Stratified, seeded assignment of every row to train/val/test. Within each
/// class (ascending label order) the rows are shuffled from the "split"
/// substream and assigned test first, then val, then train. Throws
/// SplitError naming the class if a class has 1 or 2 samples; classes with no
/// samples are skipped.
DatasetManifest split_dataset(const DatasetManifest& manifest, double test_fraction,
                              std::uint64_t seed, double val_fraction = kValidationFraction);

}  // namespace hfusion
