#include <filesystem>

#include <unistd.h>

#include <benchmark/benchmark.h>

#include "hfusion/embedding_file.hpp"
#include "hfusion/rng.hpp"

namespace {

using namespace hfusion;

EmbeddingTable random_table(std::uint32_t count, std::uint32_t rows, std::uint32_t dim) {
    EmbeddingTable t(count, rows, dim);
    SeededRng rng(1, "bench");
    for (auto& v : t.values) v = static_cast<float>(rng.normal());
    return t;
}

void BM_EncodeEmbeddings(benchmark::State& state) {
    const auto t = random_table(static_cast<std::uint32_t>(state.range(0)), 1, 768);
    for (auto _ : state) benchmark::DoNotOptimize(encode_embeddings(t));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.values.size() * 4));
}
BENCHMARK(BM_EncodeEmbeddings)->Arg(100)->Arg(1000);

void BM_DecodeEmbeddings(benchmark::State& state) {
    const auto bytes = encode_embeddings(random_table(static_cast<std::uint32_t>(state.range(0)), 1, 768));
    for (auto _ : state) benchmark::DoNotOptimize(decode_embeddings(bytes));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_DecodeEmbeddings)->Arg(100)->Arg(1000);

void BM_WriteReadRegionFile(benchmark::State& state) {
    const auto t = random_table(64, 16, 2048);
    const auto path = std::filesystem::temp_directory_path() /
                      ("hfusion_bench_" + std::to_string(::getpid()) + ".mmeb");
    for (auto _ : state) {
        write_embeddings(path, t);
        benchmark::DoNotOptimize(read_embeddings(path));
    }
    std::filesystem::remove(path);
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.values.size() * 8));
}
BENCHMARK(BM_WriteReadRegionFile);

}  // namespace
