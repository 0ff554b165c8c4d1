#include <benchmark/benchmark.h>

#include "hfusion/model.hpp"
#include "hfusion/rng.hpp"

namespace {

using namespace hfusion;

ModelInput<float> random_input(const FusionPlan& plan, SeededRng& rng) {
    auto vec = [&rng](std::size_t n) {
        DenseVector v(n);
        for (auto& x : v.values()) x = static_cast<float>(rng.normal());
        return v;
    };
    return {vec(plan.d_text_first), vec(plan.d_text_first), vec(plan.d_text_second),
            vec(plan.d_text_second), vec(plan.d_image_raw)};
}

// Full-size model: 768-dim text, 2048-dim image, 27 classes.
void BM_ModelForward(benchmark::State& state) {
    PlanConfig pc;
    const auto plan = build_plan(pc);
    HeadConfig head;
    head.variant = static_cast<HeadVariant>(state.range(0));
    const auto params = init_model(plan, head, 1);
    SeededRng rng(1, "bench");
    const auto in = random_input(plan, rng);
    for (auto _ : state) benchmark::DoNotOptimize(model_forward(in, plan, params, false, nullptr));
}
BENCHMARK(BM_ModelForward)->Arg(0)->Arg(2);

void BM_ModelTrainStep(benchmark::State& state) {
    PlanConfig pc;
    const auto plan = build_plan(pc);
    auto params = init_model(plan, HeadConfig{}, 2);
    SeededRng rng(2, "bench");
    const auto in = random_input(plan, rng);
    ForwardTrace<float> trace;
    for (auto _ : state) {
        model_forward(in, plan, params, true, &rng, &trace);
        model_backward(trace, plan, params, 3, 1.0f);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_ModelTrainStep);

}  // namespace
