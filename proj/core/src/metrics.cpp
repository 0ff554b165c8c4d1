#include "hfusion/metrics.hpp"

#include <string>

#include "hfusion/errors.hpp"

namespace hfusion {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes, std::vector<std::uint64_t> counts)
    : num_classes_(num_classes), counts_(std::move(counts)) {
    if (counts_.size() != num_classes_ * num_classes_) {
        throw ShapeError("confusion matrix needs " + std::to_string(num_classes_ * num_classes_) +
                         " counts, got " + std::to_string(counts_.size()));
    }
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted) {
    if (truth >= num_classes_ || predicted >= num_classes_) {
        throw IndexError("confusion matrix entry (" + std::to_string(truth) + ", " +
                         std::to_string(predicted) + ") outside " + std::to_string(num_classes_) +
                         " classes");
    }
    ++counts_[truth * num_classes_ + predicted];
}

std::uint64_t ConfusionMatrix::total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < num_classes_; ++i) t += at(i, i);
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < num_classes_; ++p) s += at(truth, p);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < num_classes_; ++t) s += at(t, predicted);
    return s;
}

ConfusionMatrix confusion_from(std::span<const int> labels, std::span<const int> predictions,
                               std::size_t num_classes) {
    if (labels.size() != predictions.size()) {
        throw ShapeError("labels and predictions differ in length");
    }
    ConfusionMatrix cm(num_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || predictions[i] < 0) throw IndexError("negative class index");
        cm.add(static_cast<std::size_t>(labels[i]), static_cast<std::size_t>(predictions[i]));
    }
    return cm;
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
    std::vector<ClassMetrics> out(cm.num_classes());
    for (std::size_t c = 0; c < cm.num_classes(); ++c) {
        const double tp = static_cast<double>(cm.at(c, c));
        const std::uint64_t actual = cm.row_sum(c);
        const std::uint64_t predicted = cm.col_sum(c);
        auto& m = out[c];
        m.support = actual;
        m.present = actual > 0 || predicted > 0;
        m.precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
        m.recall = actual > 0 ? tp / static_cast<double>(actual) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    }
    return out;
}

namespace {

void require_nonempty(const ConfusionMatrix& cm) {
    if (cm.num_classes() == 0 || cm.total() == 0) throw ShapeError("empty confusion matrix");
}

double macro_of(const std::vector<ClassMetrics>& per_class) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& m : per_class) {
        if (!m.present) continue;
        sum += m.f1;
        ++n;
    }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

double macro_f1(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    return macro_of(per_class_metrics(cm));
}

double accuracy(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

MetricsReport make_report(const ConfusionMatrix& cm, std::vector<double> loss_curve) {
    require_nonempty(cm);
    MetricsReport r;
    r.per_class = per_class_metrics(cm);
    r.macro_f1 = macro_of(r.per_class);
    r.accuracy = accuracy(cm);
    r.confusion = cm;
    r.loss_curve = std::move(loss_curve);
    return r;
}

}  // namespace hfusion
