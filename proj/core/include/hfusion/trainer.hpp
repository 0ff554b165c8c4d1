#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hfusion/dataset.hpp"
#include "hfusion/fusion.hpp"
#include "hfusion/metrics.hpp"
#include "hfusion/model.hpp"
#include "hfusion/optimizer.hpp"

namespace hfusion {

struct TrainConfig {
    std::size_t epochs = 20;
    std::size_t batch_size = 32;
    OptimizerConfig optimizer = OptimizerConfig::adam();
    std::uint64_t seed = 0;
    /// Slot operators. Dimensions are taken from the dataset descriptor.
    PlanConfig plan;
    /// Layer widths and variant. num_classes is taken from the dataset.
    HeadConfig head;
    /// Modalities zeroed in training and evaluation (unimodal baselines).
    ModalityMask mask;

    void validate() const;
};

/// A model together with everything needed to run it.
struct TrainedModel {
    FusionPlan plan;
    ModelParams<float> params;
    ModalityMask mask;
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_accuracy = 0.0;
    double val_macro_f1 = 0.0;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainResult {
    TrainedModel model;  // parameters of the best validation epoch
    std::size_t best_epoch = 0;
    std::vector<EpochRecord> history;
    /// Validation report of the best epoch; loss_curve holds every epoch.
    MetricsReport validation;
};

/// Plan for the slots in `config` with dimensions from the dataset header.
FusionPlan plan_for_dataset(const PlanConfig& config, const DatasetDescriptor& header);

/// Trains on the manifest's train split, selecting the epoch with the highest
/// validation macro-F1 (earliest on ties). Throws ConfigError if the train or
/// val split is empty.
TrainResult train(const TrainConfig& config, const Dataset& dataset);

/// As train(), with explicit sample index sets. The two sets may overlap.
TrainResult train_on(const TrainConfig& config, const Dataset& dataset,
                     std::span<const std::size_t> train_indices,
                     std::span<const std::size_t> val_indices);

/// Inference-mode predictions (argmax, lowest class on ties).
std::vector<int> predict(const TrainedModel& model, const Dataset& dataset,
                         std::span<const std::size_t> indices);

/// Metrics over `indices`. Never modifies the model.
MetricsReport evaluate(const TrainedModel& model, const Dataset& dataset,
                       std::span<const std::size_t> indices);

}  // namespace hfusion
