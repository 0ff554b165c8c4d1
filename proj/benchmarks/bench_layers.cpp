#include <benchmark/benchmark.h>

#include "hfusion/image.hpp"
#include "hfusion/layers.hpp"
#include "hfusion/rng.hpp"

namespace {

using namespace hfusion;

DenseVector random_vector(SeededRng& rng, std::size_t n) {
    DenseVector v(n);
    for (auto& x : v.values()) x = static_cast<float>(rng.normal());
    return v;
}

void BM_LinearForward(benchmark::State& state) {
    const auto in = static_cast<std::size_t>(state.range(0));
    const auto out = static_cast<std::size_t>(state.range(1));
    SeededRng rng(1, "bench");
    LinearLayer<float> layer(in, out);
    init_uniform(layer, rng);
    const auto x = random_vector(rng, in);
    for (auto _ : state) benchmark::DoNotOptimize(linear_forward(x, layer));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in * out));
}
BENCHMARK(BM_LinearForward)->Args({768, 512})->Args({512, 256})->Args({1536, 512});

void BM_LinearBackward(benchmark::State& state) {
    const auto in = static_cast<std::size_t>(state.range(0));
    const auto out = static_cast<std::size_t>(state.range(1));
    SeededRng rng(2, "bench");
    LinearLayer<float> layer(in, out);
    init_uniform(layer, rng);
    const auto x = random_vector(rng, in);
    const auto g = random_vector(rng, out);
    for (auto _ : state) benchmark::DoNotOptimize(linear_backward(x, layer, g));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in * out));
}
BENCHMARK(BM_LinearBackward)->Args({768, 512})->Args({512, 256});

void BM_AdapterForward(benchmark::State& state) {
    const auto target = static_cast<std::size_t>(state.range(0));
    SeededRng rng(3, "bench");
    ImageAdapter<float> adapter(2048, target, kDefaultAdapterKernel);
    init_uniform(adapter, rng);
    const auto p = random_vector(rng, 2048);
    for (auto _ : state) benchmark::DoNotOptimize(adapter_forward(p, adapter));
}
BENCHMARK(BM_AdapterForward)->Arg(768)->Arg(256);

void BM_RegionAverage(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    SeededRng rng(4, "bench");
    DenseMatrix regions(rows, 2048);
    for (auto& x : regions.values()) x = static_cast<float>(rng.normal());
    for (auto _ : state) benchmark::DoNotOptimize(region_average(regions));
}
BENCHMARK(BM_RegionAverage)->Arg(16)->Arg(256);

}  // namespace
