#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hfusion/tensor.hpp"

namespace hfusion {

// On-disk layout, all integers little-endian:
//
//   offset  size  field
//        0     4  magic "MMEB"
//        4     2  version (1)
//        6     4  count            samples
//       10     4  rows_per_sample  1 for text, N_r for region stacks
//       14     4  dim
//       18     -  payload: count * rows_per_sample * dim binary32 values,
//                 sample-major, row-major within a sample
inline constexpr std::uint8_t kEmbeddingMagic[4] = {'M', 'M', 'E', 'B'};
inline constexpr std::uint16_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderSize = 18;

/// In-memory contents of one embedding file.
struct EmbeddingTable {
    std::uint32_t count = 0;
    std::uint32_t rows_per_sample = 1;
    std::uint32_t dim = 0;
    std::vector<float> values;

    EmbeddingTable() = default;
    EmbeddingTable(std::uint32_t count, std::uint32_t rows_per_sample, std::uint32_t dim)
        : count(count),
          rows_per_sample(rows_per_sample),
          dim(dim),
          values(static_cast<std::size_t>(count) * rows_per_sample * dim, 0.0f) {}

    std::size_t sample_size() const noexcept {
        return static_cast<std::size_t>(rows_per_sample) * dim;
    }
    std::span<const float> sample(std::size_t i) const {
        return {values.data() + i * sample_size(), sample_size()};
    }
    std::span<float> sample(std::size_t i) {
        return {values.data() + i * sample_size(), sample_size()};
    }
    /// Sample i as a vector (text tables, rows_per_sample == 1).
    DenseVector vector(std::size_t i) const;
    /// Sample i as a rows_per_sample x dim matrix.
    DenseMatrix stack(std::size_t i) const;
};

/// True when header fields match and payload bits are identical.
bool bitwise_equal(const EmbeddingTable& a, const EmbeddingTable& b) noexcept;

std::vector<std::uint8_t> encode_embeddings(const EmbeddingTable& table);

/// Validates the header before touching the payload. Throws FormatError whose
/// offset is the first offending byte (for short files, the file length).
EmbeddingTable decode_embeddings(std::span<const std::uint8_t> bytes);

/// Writes via a temporary file in the same directory, then renames.
void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);
EmbeddingTable read_embeddings(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace hfusion
