#include "hfusion/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hfusion/errors.hpp"
#include "hfusion/kv_text.hpp"

namespace hfusion {

std::string_view to_string(Split s) noexcept {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
        case Split::Unassigned: return "unassigned";
    }
    return "?";
}

Split parse_split(std::string_view text) {
    if (text == "train") return Split::Train;
    if (text == "val") return Split::Val;
    if (text == "test") return Split::Test;
    if (text == "unassigned") return Split::Unassigned;
    throw ConfigError("unknown split '" + std::string(text) + "'");
}

std::vector<std::size_t> DatasetManifest::indices_of(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].split == s) out.push_back(i);
    }
    return out;
}

std::string format_descriptor(const DatasetDescriptor& d) {
    std::ostringstream os;
    os << "# hfusion dataset descriptor\n"
       << "format = 1\n"
       << "num_classes = " << d.num_classes << '\n'
       << "d_text = " << d.d_text << '\n'
       << "d_image_raw = " << d.d_image_raw << '\n'
       << "num_regions = " << d.num_regions << '\n'
       << "manifest = " << d.manifest << '\n'
       << "title_f = " << d.title_first << '\n'
       << "title_c = " << d.title_second << '\n'
       << "desc_f = " << d.desc_first << '\n'
       << "desc_c = " << d.desc_second << '\n'
       << "image_regions = " << d.image_regions << '\n';
    for (const auto& [k, v] : d.metadata) os << "meta." << k << " = " << v << '\n';
    return os.str();
}

DatasetDescriptor parse_descriptor(std::string_view text) {
    DatasetDescriptor d;
    bool has_classes = false, has_text = false, has_image = false, has_regions = false;
    for (const auto& kv : parse_key_values(text)) {
        if (!kv.section.empty()) {
            throw FormatError("descriptor does not use sections ([" + kv.section + "])", kv.line);
        }
        const auto& k = kv.key;
        if (k == "format") {
            if (parse_unsigned(kv) != 1) throw FormatError("unsupported descriptor format", kv.line);
        } else if (k == "num_classes") {
            d.num_classes = parse_unsigned(kv);
            has_classes = true;
        } else if (k == "d_text") {
            d.d_text = parse_unsigned(kv);
            has_text = true;
        } else if (k == "d_image_raw") {
            d.d_image_raw = parse_unsigned(kv);
            has_image = true;
        } else if (k == "num_regions") {
            d.num_regions = parse_unsigned(kv);
            has_regions = true;
        } else if (k == "manifest") {
            d.manifest = kv.value;
        } else if (k == "title_f") {
            d.title_first = kv.value;
        } else if (k == "title_c") {
            d.title_second = kv.value;
        } else if (k == "desc_f") {
            d.desc_first = kv.value;
        } else if (k == "desc_c") {
            d.desc_second = kv.value;
        } else if (k == "image_regions") {
            d.image_regions = kv.value;
        } else if (k.rfind("meta.", 0) == 0 && k.size() > 5) {
            d.metadata[k.substr(5)] = kv.value;
        } else {
            throw FormatError("unknown descriptor key '" + k + "'", kv.line);
        }
    }
    if (!has_classes) throw FormatError("descriptor is missing num_classes", 0);
    if (!has_text) throw FormatError("descriptor is missing d_text", 0);
    if (!has_image) throw FormatError("descriptor is missing d_image_raw", 0);
    if (!has_regions) throw FormatError("descriptor is missing num_regions", 0);
    return d;
}

std::string format_manifest_csv(const std::vector<ManifestRow>& rows) {
    std::string out(kManifestHeader);
    out += '\n';
    for (const auto& r : rows) {
        if (r.sample_id.empty() || r.sample_id.find_first_of(",\n\r\"") != std::string::npos) {
            throw ConfigError("sample id '" + r.sample_id + "' cannot be written to the manifest");
        }
        out += r.sample_id;
        out += ',';
        out += std::to_string(r.label);
        out += ',';
        out += to_string(r.split);
        out += '\n';
    }
    return out;
}

std::vector<ManifestRow> parse_manifest_csv(std::string_view text) {
    std::vector<ManifestRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!header_seen) {
            if (line != kManifestHeader) {
                throw FormatError("manifest header must be '" + std::string(kManifestHeader) + "'", line_no);
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
            throw FormatError("manifest row needs exactly 3 fields", line_no);
        }
        ManifestRow r;
        r.sample_id = std::string(line.substr(0, c1));
        if (r.sample_id.empty()) throw FormatError("empty sample id", line_no);
        const auto label = line.substr(c1 + 1, c2 - c1 - 1);
        const auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), r.label);
        if (ec != std::errc{} || ptr != label.data() + label.size()) {
            throw FormatError("label '" + std::string(label) + "' is not an integer", line_no);
        }
        try {
            r.split = parse_split(line.substr(c2 + 1));
        } catch (const ConfigError& e) {
            throw FormatError(e.what(), line_no);
        }
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw FormatError("manifest is empty (missing header)", 1);
    return rows;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    write_file_bytes(path, std::span<const std::uint8_t>(
                               reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::filesystem::path descriptor_location(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) return path / kDescriptorFileName;
    return path;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    const auto desc_path = descriptor_location(path);
    DatasetManifest m;
    m.base_dir = desc_path.parent_path();
    m.header = parse_descriptor(read_text_file(desc_path));
    m.rows = parse_manifest_csv(read_text_file(m.manifest_path()));
    return m;
}

void save_manifest(const DatasetManifest& manifest) {
    std::filesystem::create_directories(manifest.base_dir.empty() ? "." : manifest.base_dir);
    write_text_file(manifest.manifest_path(), format_manifest_csv(manifest.rows));
    write_text_file(manifest.descriptor_path(), format_descriptor(manifest.header));
}

ModalitySample<float> Dataset::sample(std::size_t i) const {
    return {title_first.vector(i), title_second.vector(i), desc_first.vector(i),
            desc_second.vector(i), image_regions.stack(i), label(i)};
}

ModelInput<float> Dataset::input(std::size_t i) const {
    return {title_first.vector(i), title_second.vector(i), desc_first.vector(i),
            desc_second.vector(i), region_average(image_regions.stack(i))};
}

Dataset load_dataset(const std::filesystem::path& path) {
    Dataset d;
    d.manifest = load_manifest(path);
    const auto& h = d.manifest.header;
    d.title_first = read_embeddings(d.manifest.resolve(h.title_first));
    d.title_second = read_embeddings(d.manifest.resolve(h.title_second));
    d.desc_first = read_embeddings(d.manifest.resolve(h.desc_first));
    d.desc_second = read_embeddings(d.manifest.resolve(h.desc_second));
    d.image_regions = read_embeddings(d.manifest.resolve(h.image_regions));
    return d;
}

void save_dataset(Dataset& dataset, const std::filesystem::path& dir) {
    dataset.manifest.base_dir = dir;
    std::filesystem::create_directories(dir);
    const auto& h = dataset.manifest.header;
    write_embeddings(dir / h.title_first, dataset.title_first);
    write_embeddings(dir / h.title_second, dataset.title_second);
    write_embeddings(dir / h.desc_first, dataset.desc_first);
    write_embeddings(dir / h.desc_second, dataset.desc_second);
    write_embeddings(dir / h.image_regions, dataset.image_regions);
    save_manifest(dataset.manifest);
}

}  // namespace hfusion
