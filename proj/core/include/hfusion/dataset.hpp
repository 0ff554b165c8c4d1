#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hfusion/embedding_file.hpp"
#include "hfusion/model.hpp"

namespace hfusion {

enum class Split { Train, Val, Test, Unassigned };

std::string_view to_string(Split s) noexcept;
Split parse_split(std::string_view text);

struct ManifestRow {
    std::string sample_id;
    long long label = 0;
    Split split = Split::Unassigned;

    friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

/// Dataset-level header: class count, dimensions and the embedding files,
/// stored as paths relative to the descriptor's directory.
struct DatasetDescriptor {
    std::size_t num_classes = 0;
    std::size_t d_text = 0;
    std::size_t d_image_raw = 0;
    std::size_t num_regions = 0;
    std::string manifest = "manifest.csv";
    std::string title_first = "title_f.mmeb";
    std::string title_second = "title_c.mmeb";
    std::string desc_first = "desc_f.mmeb";
    std::string desc_second = "desc_c.mmeb";
    std::string image_regions = "image_regions.mmeb";
    /// Free-form `meta.<key>` entries, preserved verbatim.
    std::map<std::string, std::string> metadata;

    friend bool operator==(const DatasetDescriptor&, const DatasetDescriptor&) = default;
};

inline constexpr std::string_view kDescriptorFileName = "dataset.cfg";
inline constexpr std::string_view kManifestHeader = "sample_id,label,split";

/// Descriptor plus one row per sample.
struct DatasetManifest {
    DatasetDescriptor header;
    std::vector<ManifestRow> rows;
    /// Directory that relative file references resolve against.
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::string& relative) const { return base_dir / relative; }
    std::filesystem::path descriptor_path() const { return base_dir / kDescriptorFileName; }
    std::filesystem::path manifest_path() const { return resolve(header.manifest); }

    std::vector<std::size_t> indices_of(Split s) const;
};

std::string format_descriptor(const DatasetDescriptor& d);
/// Throws FormatError (offset = line) for unknown keys or missing fields.
DatasetDescriptor parse_descriptor(std::string_view text);

std::string format_manifest_csv(const std::vector<ManifestRow>& rows);
/// Throws FormatError (offset = line).
std::vector<ManifestRow> parse_manifest_csv(std::string_view text);

/// Accepts the descriptor file itself or the directory that holds it.
std::filesystem::path descriptor_location(const std::filesystem::path& path);

DatasetManifest load_manifest(const std::filesystem::path& path);
/// Writes the descriptor and the manifest CSV into manifest.base_dir.
void save_manifest(const DatasetManifest& manifest);

/// A manifest with its five embedding tables loaded.
struct Dataset {
    DatasetManifest manifest;
    EmbeddingTable title_first;
    EmbeddingTable title_second;
    EmbeddingTable desc_first;
    EmbeddingTable desc_second;
    EmbeddingTable image_regions;

    std::size_t size() const noexcept { return manifest.rows.size(); }
    ModalitySample<float> sample(std::size_t i) const;
    /// Model input with regions already averaged.
    ModelInput<float> input(std::size_t i) const;
    int label(std::size_t i) const { return static_cast<int>(manifest.rows[i].label); }
};

/// Loads the manifest and embedding files. Performs no semantic checks
/// beyond file formats; run validate_dataset for that.
Dataset load_dataset(const std::filesystem::path& path);
/// Writes all five embedding files, the descriptor and the manifest into `dir`.
void save_dataset(Dataset& dataset, const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace hfusion
