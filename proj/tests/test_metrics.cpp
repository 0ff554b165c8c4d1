#include <set>

#include <gtest/gtest.h>

#include "hfusion/errors.hpp"
#include "hfusion/metrics.hpp"
#include "hfusion/rng.hpp"

namespace hfusion {
namespace {

// Direct count-based F1 over the classes seen in either list.
double oracle_macro_f1(const std::vector<int>& y, const std::vector<int>& p) {
    std::set<int> classes(y.begin(), y.end());
    classes.insert(p.begin(), p.end());
    double sum = 0;
    for (int c : classes) {
        double tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            tp += y[i] == c && p[i] == c;
            fp += y[i] != c && p[i] == c;
            fn += y[i] == c && p[i] != c;
        }
        sum += tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
    }
    return sum / static_cast<double>(classes.size());
}

TEST(Metrics, SmallHandWorkedExample) {
    const std::vector<int> y{0, 0, 1}, p{0, 1, 1};
    const auto cm = confusion_from(y, p, 2);
    const auto pc = per_class_metrics(cm);
    EXPECT_NEAR(pc[0].precision, 1.0, 1e-12);
    EXPECT_NEAR(pc[0].recall, 0.5, 1e-12);
    EXPECT_NEAR(pc[0].f1, 2.0 / 3, 1e-12);
    EXPECT_NEAR(pc[1].precision, 0.5, 1e-12);
    EXPECT_NEAR(pc[1].recall, 1.0, 1e-12);
    EXPECT_NEAR(pc[1].f1, 2.0 / 3, 1e-12);
    EXPECT_NEAR(macro_f1(cm), 2.0 / 3, 1e-12);
    EXPECT_NEAR(accuracy(cm), 2.0 / 3, 1e-12);
    EXPECT_EQ(pc[0].support, 2u);
}

TEST(Metrics, PerfectPredictionsScoreOne) {
    const std::vector<int> y{0, 1, 2, 2, 1, 0};
    const auto cm = confusion_from(y, y, 3);
    EXPECT_EQ(accuracy(cm), 1.0);
    EXPECT_EQ(macro_f1(cm), 1.0);
}

TEST(Metrics, ConstantPredictorOnBalancedClasses) {
    const std::vector<int> y{0, 1, 2, 0, 1, 2, 0, 1, 2};
    const std::vector<int> p(9, 0);
    const auto cm = confusion_from(y, p, 3);
    EXPECT_NEAR(accuracy(cm), 1.0 / 3, 1e-12);
    // class 0: precision 1/3, recall 1, f1 1/2; classes 1 and 2 score 0
    EXPECT_NEAR(macro_f1(cm), 0.5 / 3, 1e-12);
}

TEST(Metrics, AbsentClassesDoNotEnterTheMean) {
    const std::vector<int> y{0, 0, 1, 1}, p{0, 0, 1, 0};
    const auto cm5 = confusion_from(y, p, 5);
    const auto cm2 = confusion_from(y, p, 2);
    EXPECT_DOUBLE_EQ(macro_f1(cm5), macro_f1(cm2));
    const auto pc = per_class_metrics(cm5);
    EXPECT_FALSE(pc[4].present);
    EXPECT_TRUE(pc[1].present);
}

TEST(Metrics, PredictedOnlyClassCountsAsPresent) {
    const std::vector<int> y{0, 0}, p{0, 1};
    const auto cm = confusion_from(y, p, 3);
    EXPECT_TRUE(per_class_metrics(cm)[1].present);
    EXPECT_NEAR(macro_f1(cm), (2.0 / 3 + 0.0) / 2, 1e-12);
}

TEST(Metrics, MatchesCountingOracleOnRandomLabels) {
    SeededRng rng(5, "metrics");
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(60), k = 1 + rng.below(8);
        std::vector<int> y(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.below(k));
            p[i] = rng.uniform() < 0.6 ? y[i] : static_cast<int>(rng.below(k));
        }
        const auto cm = confusion_from(y, p, k);
        EXPECT_NEAR(macro_f1(cm), oracle_macro_f1(y, p), 1e-12);
        EXPECT_EQ(cm.total(), n);
        std::uint64_t rows = 0, cols = 0;
        for (std::size_t c = 0; c < k; ++c) {
            rows += cm.row_sum(c);
            cols += cm.col_sum(c);
        }
        EXPECT_EQ(rows, n);
        EXPECT_EQ(cols, n);
    }
}

TEST(Metrics, EmptyInputsThrow) {
    const auto cm = confusion_from(std::vector<int>{}, std::vector<int>{}, 3);
    EXPECT_THROW(macro_f1(cm), ShapeError);
    EXPECT_THROW(accuracy(cm), ShapeError);
    EXPECT_THROW(make_report(cm), ShapeError);
    EXPECT_THROW(macro_f1(ConfusionMatrix{}), ShapeError);
}

TEST(Metrics, BadShapesAndIndices) {
    EXPECT_THROW(confusion_from(std::vector<int>{0, 1}, std::vector<int>{0}, 2), ShapeError);
    EXPECT_THROW(confusion_from(std::vector<int>{2}, std::vector<int>{0}, 2), IndexError);
    EXPECT_THROW(confusion_from(std::vector<int>{-1}, std::vector<int>{0}, 2), IndexError);
    EXPECT_THROW(ConfusionMatrix(2, std::vector<std::uint64_t>(3)), ShapeError);
}

TEST(Metrics, ReportCarriesEverything) {
    const std::vector<int> y{0, 1, 1}, p{0, 1, 0};
    const auto r = make_report(confusion_from(y, p, 2), {1.5, 0.5});
    EXPECT_NEAR(r.accuracy, 2.0 / 3, 1e-12);
    EXPECT_EQ(r.per_class.size(), 2u);
    EXPECT_EQ(r.confusion.at(1, 0), 1u);
    EXPECT_EQ(r.loss_curve, (std::vector<double>{1.5, 0.5}));
}

}  // namespace
}  // namespace hfusion
