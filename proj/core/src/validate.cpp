#include "hfusion/validate.hpp"

#include <cmath>
#include <optional>
#include <set>

#include "hfusion/errors.hpp"

namespace hfusion {
namespace {

struct TableCheck {
    const char* field;
    const EmbeddingTable* table;
    std::size_t rows_per_sample;
    std::size_t dim;
};

void check_table(const TableCheck& c, const DatasetManifest& m, std::vector<Violation>& out) {
    const auto& t = *c.table;
    if (t.count != m.rows.size()) {
        out.push_back({"", c.field,
                       "file holds " + std::to_string(t.count) + " samples, manifest lists " +
                           std::to_string(m.rows.size())});
    }
    if (t.rows_per_sample != c.rows_per_sample) {
        out.push_back({"", c.field,
                       "rows_per_sample is " + std::to_string(t.rows_per_sample) + ", expected " +
                           std::to_string(c.rows_per_sample)});
    }
    if (t.dim != c.dim) {
        out.push_back({"", c.field,
                       "dim is " + std::to_string(t.dim) + ", descriptor says " +
                           std::to_string(c.dim)});
    }
    const std::size_t n = std::min<std::size_t>(t.count, m.rows.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (float v : t.sample(i)) {
            if (!std::isfinite(v)) {
                out.push_back({m.rows[i].sample_id, c.field, "payload contains a non-finite value"});
                break;
            }
        }
    }
}

void check_rows(const DatasetManifest& m, std::vector<Violation>& out) {
    const auto& h = m.header;
    if (h.num_classes == 0) out.push_back({"", "num_classes", "must be positive"});
    if (h.d_text == 0) out.push_back({"", "d_text", "must be positive"});
    if (h.d_image_raw == 0) out.push_back({"", "d_image_raw", "must be positive"});
    if (h.num_regions == 0) out.push_back({"", "num_regions", "must be positive"});
    std::set<std::string> ids;
    for (const auto& r : m.rows) {
        if (r.label < 0 || static_cast<unsigned long long>(r.label) >= h.num_classes) {
            out.push_back({r.sample_id, "label",
                           "label " + std::to_string(r.label) + " outside [0, " +
                               std::to_string(h.num_classes) + ")"});
        }
        if (!ids.insert(r.sample_id).second) {
            out.push_back({r.sample_id, "sample_id", "duplicate sample id"});
        }
    }
}

void check_dataset(const Dataset& d, std::vector<Violation>& out) {
    const auto& m = d.manifest;
    const auto& h = m.header;
    check_rows(m, out);
    const TableCheck checks[] = {
        {"title_f", &d.title_first, 1, h.d_text},
        {"title_c", &d.title_second, 1, h.d_text},
        {"desc_f", &d.desc_first, 1, h.d_text},
        {"desc_c", &d.desc_second, 1, h.d_text},
        {"image_regions", &d.image_regions, h.num_regions, h.d_image_raw},
    };
    for (const auto& c : checks) check_table(c, m, out);
}

}  // namespace

std::vector<Violation> validate_dataset(const Dataset& dataset) {
    std::vector<Violation> out;
    check_dataset(dataset, out);
    return out;
}

std::vector<Violation> validate_dataset(const std::filesystem::path& path) {
    std::vector<Violation> out;
    Dataset d;
    try {
        d.manifest = load_manifest(path);
    } catch (const Error& e) {
        out.push_back({"", "manifest", e.what()});
        return out;
    }
    const auto& h = d.manifest.header;
    struct FileRef {
        const char* field;
        const std::string* name;
        EmbeddingTable* table;
    };
    const FileRef files[] = {
        {"title_f", &h.title_first, &d.title_first},
        {"title_c", &h.title_second, &d.title_second},
        {"desc_f", &h.desc_first, &d.desc_first},
        {"desc_c", &h.desc_second, &d.desc_second},
        {"image_regions", &h.image_regions, &d.image_regions},
    };
    bool readable = true;
    for (const auto& f : files) {
        try {
            *f.table = read_embeddings(d.manifest.resolve(*f.name));
        } catch (const Error& e) {
            out.push_back({"", f.field, e.what()});
            readable = false;
        }
    }
    if (!readable) {
        check_rows(d.manifest, out);
        return out;
    }
    check_dataset(d, out);
    return out;
}

std::string format_violation(const Violation& v) {
    std::string s = v.sample_id.empty() ? std::string("<file>") : v.sample_id;
    s += ' ';
    s += v.field;
    s += ": ";
    s += v.message;
    return s;
}

}  // namespace hfusion
