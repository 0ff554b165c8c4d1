#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hfusion/dataset.hpp"

namespace hfusion {

/// One problem found in a dataset. `sample_id` is empty for file-level issues.
struct Violation {
    std::string sample_id;
    std::string field;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks dims against the descriptor, label ranges, sample counts, unique
/// ids and payload finiteness. Unreadable or malformed files are reported as
/// violations rather than thrown.
std::vector<Violation> validate_dataset(const std::filesystem::path& path);

/// Same checks on an already loaded dataset.
std::vector<Violation> validate_dataset(const Dataset& dataset);

std::string format_violation(const Violation& v);

}  // namespace hfusion
