#include "hfusion/trainer.hpp"

#include <numeric>
#include <string>

#include "hfusion/errors.hpp"
#include "hfusion/rng.hpp"

namespace hfusion {

void TrainConfig::validate() const {
    if (epochs == 0) throw ConfigError("epochs must be at least 1");
    if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
    optimizer.validate();
    head.validate();
}

FusionPlan plan_for_dataset(const PlanConfig& config, const DatasetDescriptor& header) {
    PlanConfig c = config;
    c.d_text = header.d_text;
    c.d_text_second = 0;
    c.d_image_raw = header.d_image_raw;
    return build_plan(c);
}

namespace {

std::vector<ModelInput<float>> prepare_inputs(const Dataset& dataset,
                                              std::span<const std::size_t> indices,
                                              ModalityMask mask) {
    std::vector<ModelInput<float>> inputs;
    inputs.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= dataset.size()) throw IndexError("sample index " + std::to_string(i) + " out of range");
        inputs.push_back(dataset.input(i));
        apply_mask(inputs.back(), mask);
    }
    return inputs;
}

std::vector<int> labels_of(const Dataset& dataset, std::span<const std::size_t> indices,
                           std::size_t num_classes) {
    std::vector<int> labels;
    labels.reserve(indices.size());
    for (std::size_t i : indices) {
        const int y = dataset.label(i);
        require_class_index(y, num_classes);
        labels.push_back(y);
    }
    return labels;
}

std::vector<int> predict_inputs(const TrainedModel& model,
                                const std::vector<ModelInput<float>>& inputs) {
    std::vector<int> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) {
        const auto probs = model_forward(in, model.plan, model.params, false, nullptr);
        out.push_back(static_cast<int>(argmax(probs)));
    }
    return out;
}

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& dataset) {
    const auto train_idx = dataset.manifest.indices_of(Split::Train);
    const auto val_idx = dataset.manifest.indices_of(Split::Val);
    if (train_idx.empty()) throw ConfigError("the train split is empty");
    if (val_idx.empty()) throw ConfigError("the validation split is empty");
    return train_on(config, dataset, train_idx, val_idx);
}

TrainResult train_on(const TrainConfig& config, const Dataset& dataset,
                     std::span<const std::size_t> train_indices,
                     std::span<const std::size_t> val_indices) {
    config.validate();
    if (train_indices.empty()) throw ConfigError("the train split is empty");
    if (val_indices.empty()) throw ConfigError("the validation split is empty");

    const std::size_t num_classes = dataset.manifest.header.num_classes;
    HeadConfig head = config.head;
    head.num_classes = num_classes;

    TrainedModel model;
    model.plan = plan_for_dataset(config.plan, dataset.manifest.header);
    model.params = init_model(model.plan, head, config.seed);
    model.mask = config.mask;

    const auto train_inputs = prepare_inputs(dataset, train_indices, config.mask);
    const auto train_labels = labels_of(dataset, train_indices, num_classes);
    const auto val_inputs = prepare_inputs(dataset, val_indices, config.mask);
    const auto val_labels = labels_of(dataset, val_indices, num_classes);

    Optimizer optimizer(config.optimizer);
    const std::string dropout_prefix =
        "dropout:" + std::string(dropout_layer_name(head.variant)) + ":";

    TrainResult result;
    std::vector<double> loss_curve;
    double best_f1 = -1.0;
    std::uint64_t step = 0;
    std::vector<std::size_t> order(train_inputs.size());
    ForwardTrace<float> trace;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        SeededRng shuffle_rng(config.seed, "shuffle:" + std::to_string(epoch));
        shuffle_rng.shuffle(std::span<std::size_t>(order));

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            const float scale = 1.0f / static_cast<float>(end - start);
            SeededRng dropout_rng(config.seed, dropout_prefix + std::to_string(step));
            zero_grad(model.params);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t s = order[k];
                model_forward(train_inputs[s], model.plan, model.params, true, &dropout_rng, &trace);
                epoch_loss += cross_entropy(trace.probs, train_labels[s]);
                model_backward(trace, model.plan, model.params, train_labels[s], scale);
            }
            const auto views = optimizer_views(model.params);
            optimizer.step(views);
            ++step;
        }
        epoch_loss /= static_cast<double>(order.size());
        loss_curve.push_back(epoch_loss);

        const auto predictions = predict_inputs(model, val_inputs);
        const auto report = make_report(confusion_from(val_labels, predictions, num_classes));
        result.history.push_back({epoch, epoch_loss, report.accuracy, report.macro_f1});
        if (report.macro_f1 > best_f1) {
            best_f1 = report.macro_f1;
            result.best_epoch = epoch;
            result.model = model;
            result.validation = report;
        }
    }
    zero_grad(result.model.params);
    result.validation.loss_curve = std::move(loss_curve);
    return result;
}

std::vector<int> predict(const TrainedModel& model, const Dataset& dataset,
                         std::span<const std::size_t> indices) {
    return predict_inputs(model, prepare_inputs(dataset, indices, model.mask));
}

MetricsReport evaluate(const TrainedModel& model, const Dataset& dataset,
                       std::span<const std::size_t> indices) {
    if (indices.empty()) throw ConfigError("cannot evaluate an empty split");
    const std::size_t num_classes = model.params.head.num_classes();
    const auto labels = labels_of(dataset, indices, num_classes);
    return make_report(confusion_from(labels, predict(model, dataset, indices), num_classes));
}

}  // namespace hfusion
