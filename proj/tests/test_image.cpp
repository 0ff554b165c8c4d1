#include <gtest/gtest.h>

#include "hfusion/errors.hpp"
#include "hfusion/image.hpp"
#include "support.hpp"

namespace hfusion {
namespace {

ImageAdapter<float> delta_adapter(std::size_t in, std::size_t target, std::size_t k = 9) {
    ImageAdapter<float> a(in, target, k);
    a.kernel[k / 2] = 1.0f;
    return a;
}

// Brute force: explicitly zero-pad, correlate, then pool window by window.
std::vector<double> reference_adapter(const std::vector<double>& x, const std::vector<double>& kernel,
                                      std::size_t target) {
    const std::size_t n = x.size(), k = kernel.size(), half = k / 2;
    std::vector<double> padded(n + 2 * half, 0.0);
    for (std::size_t i = 0; i < n; ++i) padded[half + i] = x[i];
    std::vector<double> conv(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < k; ++t) conv[i] += kernel[t] * padded[i + t];
    }
    const std::size_t w = (n + target - 1) / target;
    std::vector<double> out(target, 0.0);
    for (std::size_t j = 0; j < target && j * w < n; ++j) {
        double best = conv[j * w];
        for (std::size_t i = j * w; i < std::min(n, (j + 1) * w); ++i) best = std::max(best, conv[i]);
        out[j] = best;
    }
    return out;
}

TEST(ImageAdapter, DeltaKernelWithUnitWindowIsIdentity) {
    const auto a = delta_adapter(6, 6);
    EXPECT_EQ(a.pool_window, 1u);
    const DenseVector x{3, -1, 4, 1, -5, 9};
    EXPECT_EQ(adapter_forward(x, a), x);
}

TEST(ImageAdapter, ZeroKernelGivesZeroOutput) {
    ImageAdapter<float> a(10, 4);
    SeededRng rng(1, "t");
    EXPECT_EQ(adapter_forward(test::random_vector(rng, 10), a), DenseVector(4));
}

TEST(ImageAdapter, HandPoolingExample) {
    const auto a = delta_adapter(8, 4);
    EXPECT_EQ(a.pool_window, 2u);
    EXPECT_EQ(adapter_forward(DenseVector{1, 5, 2, 4, 3, 3, 6, 0}, a), (DenseVector{5, 4, 3, 6}));
}

TEST(ImageAdapter, TiesRouteGradientToLowestIndex) {
    auto a = delta_adapter(4, 1);
    AdapterTrace<float> trace;
    adapter_forward(DenseVector{2, 7, 7, 1}, a, &trace);
    ASSERT_EQ(trace.winners.size(), 1u);
    EXPECT_EQ(trace.winners[0], 1u);
    const auto gi = adapter_backward(trace, a, DenseVector{1});
    EXPECT_EQ(gi, (DenseVector{0, 1, 0, 0}));
}

TEST(ImageAdapter, UnevenInputPadsWithZeros) {
    // 10 inputs onto 4 outputs: window 3 gives 4 windows (last one short).
    auto a = delta_adapter(10, 4, 1);
    EXPECT_EQ(a.pool_window, 3u);
    EXPECT_EQ(adapter_forward(DenseVector{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, a),
              (DenseVector{3, 6, 9, 10}));
    // 9 inputs onto 4 outputs: window 3 yields only 3 windows; the rest is zero.
    auto b = delta_adapter(9, 4, 1);
    EXPECT_EQ(b.pooled_count(), 3u);
    EXPECT_EQ(adapter_forward(DenseVector{1, 2, 3, 4, 5, 6, 7, 8, 9}, b), (DenseVector{3, 6, 9, 0}));
}

TEST(ImageAdapter, MatchesBruteForceOverRandomShapes) {
    SeededRng rng(2, "bf");
    for (int c = 0; c < 1000; ++c) {
        const std::size_t target = 1 + rng.below(12);
        const std::size_t in = target + rng.below(40);
        const std::size_t k = 1 + 2 * rng.below(6);
        ImageAdapter<double> a(in, target, k);
        init_uniform(a, rng);
        const auto x = test::random_vector<double>(rng, in);
        const auto y = adapter_forward(x, a);
        ASSERT_EQ(y.dim(), target);
        const auto ref = reference_adapter(x.storage(), a.kernel.storage(), target);
        for (std::size_t j = 0; j < target; ++j) ASSERT_NEAR(y[j], ref[j], 1e-12);
    }
}

TEST(ImageAdapter, RejectsBadConfiguration) {
    EXPECT_THROW(ImageAdapter<float>(4, 8), ConfigError);
    EXPECT_THROW(ImageAdapter<float>(8, 4, 4), ConfigError);
    EXPECT_THROW(ImageAdapter<float>(8, 0), ConfigError);
    ImageAdapter<float> a(8, 4);
    EXPECT_THROW(adapter_forward(DenseVector(7), a), ShapeError);
}

TEST(ImageAdapter, BackwardMatchesFiniteDifferences) {
    SeededRng rng(3, "fd");
    int compared = 0;
    for (int c = 0; c < 50; ++c) {
        ImageAdapter<double> a(20, 6, 5);
        init_uniform(a, rng);
        auto x = test::random_vector<double>(rng, 20);
        const auto r = test::random_vector<double>(rng, 6);
        AdapterTrace<double> trace;
        adapter_forward(x, a, &trace);
        const auto winners = trace.winners;
        a.zero_grad();
        const auto gx = adapter_backward(trace, a, r);

        auto loss = [&] {
            AdapterTrace<double> t;
            const auto y = adapter_forward(x, a, &t);
            double s = 0.0;
            for (std::size_t j = 0; j < y.dim(); ++j) s += r[j] * y[j];
            return std::make_pair(s, t.winners);
        };
        auto check = [&](double& coord, double analytic) {
            const double saved = coord;
            // piecewise linear, so a wide step is exact while winners hold
            coord = saved + 1e-4;
            const auto up = loss();
            coord = saved - 1e-4;
            const auto down = loss();
            coord = saved;
            if (up.second != winners || down.second != winners) return;
            ++compared;
            EXPECT_LT(test::rel_err(analytic, (up.first - down.first) / 2e-4), 1e-6);
        };
        for (std::size_t t = 0; t < a.kernel.dim(); ++t) check(a.kernel[t], a.grad_kernel[t]);
        for (std::size_t i = 0; i < x.dim(); ++i) check(x[i], gx[i]);
    }
    EXPECT_GT(compared, 1000);
}

TEST(ImageAdapter, KernelGradientAccumulates) {
    auto a = delta_adapter(8, 4, 3);
    AdapterTrace<float> trace;
    adapter_forward(DenseVector{1, 5, 2, 4, 3, 3, 6, 0}, a, &trace);
    adapter_backward(trace, a, DenseVector{1, 1, 1, 1});
    const auto once = a.grad_kernel;
    adapter_backward(trace, a, DenseVector{1, 1, 1, 1});
    for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(a.grad_kernel[t], 2 * once[t]);
}

TEST(ImageAdapterProperty, OutputDimAlwaysEqualsTarget) {
    SeededRng rng(4, "dim");
    for (int c = 0; c < 1000; ++c) {
        const std::size_t target = 1 + rng.below(64);
        const std::size_t in = target + rng.below(200);
        ImageAdapter<float> a(in, target, 3);
        EXPECT_EQ(adapter_forward(DenseVector(in, 1.0f), a).dim(), target);
    }
}

}  // namespace
}  // namespace hfusion
