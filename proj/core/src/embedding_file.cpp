#include "hfusion/embedding_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "hfusion/errors.hpp"

namespace hfusion {
namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) |
           (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

}  // namespace

DenseVector EmbeddingTable::vector(std::size_t i) const {
    if (rows_per_sample != 1) {
        throw ShapeError("embedding table has " + std::to_string(rows_per_sample) +
                         " rows per sample; expected a single-row (text) table");
    }
    return DenseVector(sample(i));
}

DenseMatrix EmbeddingTable::stack(std::size_t i) const {
    const auto s = sample(i);
    return DenseMatrix(rows_per_sample, dim, std::vector<float>(s.begin(), s.end()));
}

bool bitwise_equal(const EmbeddingTable& a, const EmbeddingTable& b) noexcept {
    return a.count == b.count && a.rows_per_sample == b.rows_per_sample && a.dim == b.dim &&
           a.values.size() == b.values.size() &&
           (a.values.empty() ||
            std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(float)) == 0);
}

std::vector<std::uint8_t> encode_embeddings(const EmbeddingTable& table) {
    const std::uint64_t expected =
        static_cast<std::uint64_t>(table.count) * table.rows_per_sample * table.dim;
    if (table.values.size() != expected) {
        throw ShapeError("embedding table holds " + std::to_string(table.values.size()) +
                         " values, header describes " + std::to_string(expected));
    }
    if (table.rows_per_sample == 0 || table.dim == 0) {
        throw ShapeError("embedding rows_per_sample and dim must be positive");
    }
    std::vector<std::uint8_t> out;
    out.reserve(kEmbeddingHeaderSize + 4 * table.values.size());
    for (std::uint8_t b : kEmbeddingMagic) out.push_back(b);
    put_u16(out, kEmbeddingVersion);
    put_u32(out, table.count);
    put_u32(out, table.rows_per_sample);
    put_u32(out, table.dim);
    for (float v : table.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

EmbeddingTable decode_embeddings(std::span<const std::uint8_t> bytes) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (i >= bytes.size()) throw FormatError("embedding file truncated inside magic", bytes.size());
        if (bytes[i] != kEmbeddingMagic[i]) throw FormatError("bad embedding magic", i);
    }
    if (bytes.size() < 6) throw FormatError("embedding file truncated inside version", bytes.size());
    if (get_u16(bytes, 4) != kEmbeddingVersion) {
        throw FormatError("unsupported embedding version " + std::to_string(get_u16(bytes, 4)), 4);
    }
    if (bytes.size() < kEmbeddingHeaderSize) {
        throw FormatError("embedding file truncated inside header", bytes.size());
    }
    EmbeddingTable t;
    t.count = get_u32(bytes, 6);
    t.rows_per_sample = get_u32(bytes, 10);
    t.dim = get_u32(bytes, 14);
    if (t.rows_per_sample == 0) throw FormatError("rows_per_sample must be positive", 10);
    if (t.dim == 0) throw FormatError("dim must be positive", 14);

    const std::uint64_t n = static_cast<std::uint64_t>(t.count) * t.rows_per_sample * t.dim;
    const std::uint64_t expected_size = kEmbeddingHeaderSize + 4 * n;
    if (bytes.size() < expected_size) {
        throw FormatError("embedding payload truncated: expected " + std::to_string(expected_size) +
                              " bytes, file has " + std::to_string(bytes.size()),
                          bytes.size());
    }
    if (bytes.size() > expected_size) {
        throw FormatError("embedding file has " + std::to_string(bytes.size() - expected_size) +
                              " trailing bytes",
                          expected_size);
    }
    t.values.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        t.values[i] = std::bit_cast<float>(get_u32(bytes, kEmbeddingHeaderSize + 4 * i));
    }
    return t;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> bytes(size);
    if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
        throw IoError("failed to read '" + path.string() + "'");
    }
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("failed to write '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
    write_file_bytes(path, encode_embeddings(table));
}

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
    return decode_embeddings(read_file_bytes(path));
}

}  // namespace hfusion
