#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hfusion {

/// counts(truth, predicted).
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t num_classes)
        : num_classes_(num_classes), counts_(num_classes * num_classes, 0) {}
    ConfusionMatrix(std::size_t num_classes, std::vector<std::uint64_t> counts);

    void add(std::size_t truth, std::size_t predicted);

    std::size_t num_classes() const noexcept { return num_classes_; }
    std::uint64_t at(std::size_t truth, std::size_t predicted) const {
        return counts_[truth * num_classes_ + predicted];
    }
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

    std::uint64_t total() const noexcept;
    std::uint64_t trace() const noexcept;
    std::uint64_t row_sum(std::size_t truth) const;
    std::uint64_t col_sum(std::size_t predicted) const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t num_classes_ = 0;
    std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion_from(std::span<const int> labels, std::span<const int> predictions,
                               std::size_t num_classes);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;  // ground-truth count
    /// Appears in ground truth or predictions; only these enter the macro mean.
    bool present = false;

    friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

/// Precision, recall and F1 per class; each is 0 when its denominator is 0.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

/// Unweighted mean F1 over classes present in ground truth or predictions.
/// Throws ShapeError for a matrix with no classes or no samples.
double macro_f1(const ConfusionMatrix& cm);

/// trace / total. Throws ShapeError for an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct MetricsReport {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<ClassMetrics> per_class;
    ConfusionMatrix confusion;
    /// Mean training loss per epoch (empty for standalone evaluations).
    std::vector<double> loss_curve;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport make_report(const ConfusionMatrix& cm, std::vector<double> loss_curve = {});

}  // namespace hfusion
