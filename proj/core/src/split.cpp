#include "hfusion/split.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "hfusion/errors.hpp"
#include "hfusion/rng.hpp"

namespace hfusion {

SplitCounts split_counts(std::size_t n, double test_fraction, double val_fraction) {
    if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test fraction must lie in [0, 1)");
    }
    if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
        throw ConfigError("validation fraction must lie in [0, 1)");
    }
    SplitCounts c;
    c.test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
    const std::size_t rest = n - c.test;
    c.val = static_cast<std::size_t>(std::llround(static_cast<double>(rest) * val_fraction));
    c.train = rest - c.val;
    return c;
}

DatasetManifest split_dataset(const DatasetManifest& manifest, double test_fraction,
                              std::uint64_t seed, double val_fraction) {
    std::map<long long, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
        by_class[manifest.rows[i].label].push_back(i);
    }
    for (const auto& [label, members] : by_class) {
        if (members.size() < 3) {
            throw SplitError("class " + std::to_string(label) + " has " +
                             std::to_string(members.size()) + " samples; at least 3 are required");
        }
    }

    DatasetManifest out = manifest;
    SeededRng rng(seed, "split");
    for (auto& [label, members] : by_class) {
        rng.shuffle(std::span<std::size_t>(members));
        const SplitCounts c = split_counts(members.size(), test_fraction, val_fraction);
        for (std::size_t k = 0; k < members.size(); ++k) {
            Split s = Split::Train;
            if (k < c.test) s = Split::Test;
            else if (k < c.test + c.val) s = Split::Val;
            out.rows[members[k]].split = s;
        }
    }
    return out;
}

}  // namespace hfusion
