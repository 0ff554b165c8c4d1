#pragma once

#include <cstddef>
#include <cstdint>

#include "hfusion/dataset.hpp"

namespace hfusion {

/// Multimodal classification task where text and image carry disjoint
/// halves of the label.
///
/// Each class is a (coarse, fine) pair, label = coarse * n_fine + fine. All four
/// text embeddings hold one-hot(coarse) in their first n_coarse dims; every
/// image region holds one-hot(fine) in its first n_fine dims. Gaussian noise
/// of standard deviation `noise_sigma` is added independently to every value.
/// Text alone can therefore identify at most 1/n_fine of the labels, the
/// image alone at most 1/n_coarse, both together all of them.
struct SyntheticSpec {
    std::size_t n_coarse = 9;
    std::size_t n_fine = 3;
    std::size_t samples_per_class = 50;
    double noise_sigma = 0.1;
    std::size_t d_text = 16;
    std::size_t d_image_raw = 32;
    std::size_t num_regions = 16;

    std::size_t num_classes() const noexcept { return n_coarse * n_fine; }
    void validate() const;
};

/// Samples are ordered by class, then by index within the class; ids are
/// "s000000", "s000001", ...; every split is "unassigned". Draws come from the
/// "synth" substream.
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace hfusion
