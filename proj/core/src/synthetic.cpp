#include "hfusion/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "hfusion/errors.hpp"
#include "hfusion/rng.hpp"

namespace hfusion {

void SyntheticSpec::validate() const {
    if (n_coarse == 0 || n_fine == 0) throw ConfigError("n_coarse and n_fine must be positive");
    if (samples_per_class == 0) throw ConfigError("samples_per_class must be positive");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw ConfigError("noise_sigma must be a finite non-negative number");
    }
    if (d_text < n_coarse) throw ConfigError("d_text must be at least n_coarse");
    if (d_image_raw < n_fine) throw ConfigError("d_image_raw must be at least n_fine");
    if (num_regions == 0) throw ConfigError("num_regions must be positive");
    const double total = static_cast<double>(num_classes()) * static_cast<double>(samples_per_class);
    if (total > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("too many samples");
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    const auto n = static_cast<std::uint32_t>(spec.num_classes() * spec.samples_per_class);
    const auto d_text = static_cast<std::uint32_t>(spec.d_text);
    const auto d_image = static_cast<std::uint32_t>(spec.d_image_raw);
    const auto regions = static_cast<std::uint32_t>(spec.num_regions);

    Dataset ds;
    auto& h = ds.manifest.header;
    h.num_classes = spec.num_classes();
    h.d_text = spec.d_text;
    h.d_image_raw = spec.d_image_raw;
    h.num_regions = spec.num_regions;
    h.metadata["generator"] = "synthetic";
    h.metadata["n_coarse"] = std::to_string(spec.n_coarse);
    h.metadata["n_fine"] = std::to_string(spec.n_fine);
    h.metadata["seed"] = std::to_string(seed);

    ds.title_first = EmbeddingTable(n, 1, d_text);
    ds.title_second = EmbeddingTable(n, 1, d_text);
    ds.desc_first = EmbeddingTable(n, 1, d_text);
    ds.desc_second = EmbeddingTable(n, 1, d_text);
    ds.image_regions = EmbeddingTable(n, regions, d_image);

    SeededRng rng(seed, "synth");
    const double sigma = spec.noise_sigma;
    auto noisy_one_hot = [&](std::span<float> out, std::size_t hot) {
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double base = j == hot ? 1.0 : 0.0;
            out[j] = static_cast<float>(base + sigma * rng.normal());
        }
    };

    std::size_t i = 0;
    ds.manifest.rows.reserve(n);
    for (std::size_t label = 0; label < spec.num_classes(); ++label) {
        const std::size_t coarse = label / spec.n_fine;
        const std::size_t fine = label % spec.n_fine;
        for (std::size_t k = 0; k < spec.samples_per_class; ++k, ++i) {
            char id[32];
            std::snprintf(id, sizeof id, "s%06zu", i);
            ds.manifest.rows.push_back({id, static_cast<long long>(label), Split::Unassigned});
            noisy_one_hot(ds.title_first.sample(i), coarse);
            noisy_one_hot(ds.title_second.sample(i), coarse);
            noisy_one_hot(ds.desc_first.sample(i), coarse);
            noisy_one_hot(ds.desc_second.sample(i), coarse);
            auto stack = ds.image_regions.sample(i);
            for (std::size_t r = 0; r < spec.num_regions; ++r) {
                noisy_one_hot(stack.subspan(r * spec.d_image_raw, spec.d_image_raw), fine);
            }
        }
    }
    return ds;
}

}  // namespace hfusion
