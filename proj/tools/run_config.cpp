#include "run_config.hpp"

#include "hfusion/dataset.hpp"
#include "hfusion/errors.hpp"
#include "hfusion/kv_text.hpp"

namespace hfusion::cli {
namespace {

std::size_t as_size(const KeyValue& kv) { return static_cast<std::size_t>(parse_unsigned(kv)); }

[[noreturn]] void unknown_key(std::string_view section, std::string_view key) {
    std::string name = section.empty() ? std::string(key)
                                       : std::string(section) + "." + std::string(key);
    throw ConfigError("unknown config key '" + name + "'");
}

}  // namespace

void RunConfig::set(std::string_view section, std::string_view key, std::string_view value) {
    const KeyValue kv{std::string(section), std::string(key), trim(value), 0};
    try {
        if (section.empty()) {
            if (key == "seed") seed = parse_unsigned(kv);
            else unknown_key(section, key);
        } else if (section == "paths") {
            if (key == "dataset") dataset = kv.value;
            else if (key == "out") out = kv.value;
            else if (key == "model") model = kv.value;
            else if (key == "metrics") metrics = kv.value;
            else unknown_key(section, key);
        } else if (section == "plan") {
            if (key == "inner") plan.inner = parse_fusion_op(kv.value);
            else if (key == "outer") plan.outer = parse_fusion_op(kv.value);
            else if (key == "final") plan.final = parse_fusion_op(kv.value);
            else if (key == "d_text") plan.d_text = as_size(kv);
            else if (key == "d_text_second") plan.d_text_second = as_size(kv);
            else if (key == "d_image") plan.d_image_raw = as_size(kv);
            else unknown_key(section, key);
        } else if (section == "head") {
            if (key == "variant") head.variant = parse_head_variant(kv.value);
            else if (key == "hidden1") head.hidden1 = as_size(kv);
            else if (key == "hidden2") head.hidden2 = as_size(kv);
            else if (key == "extra") head.extra = as_size(kv);
            else if (key == "dropout") head.dropout_p = parse_double(kv);
            else if (key == "kernel") head.adapter_kernel = as_size(kv);
            else unknown_key(section, key);
        } else if (section == "train") {
            if (key == "epochs") epochs = as_size(kv);
            else if (key == "batch_size") batch_size = as_size(kv);
            else if (key == "optimizer") optimizer = parse_optimizer_kind(kv.value);
            else if (key == "lr") lr = parse_double(kv);
            else if (key == "weight_decay") weight_decay = parse_double(kv);
            else if (key == "mask") mask = parse_modality_mask(kv.value);
            else unknown_key(section, key);
        } else if (section == "split") {
            if (key == "test_fraction") test_fraction = parse_double(kv);
            else if (key == "val_fraction") val_fraction = parse_double(kv);
            else unknown_key(section, key);
        } else if (section == "synth") {
            if (key == "n_coarse") synth.n_coarse = as_size(kv);
            else if (key == "n_fine") synth.n_fine = as_size(kv);
            else if (key == "samples_per_class") synth.samples_per_class = as_size(kv);
            else if (key == "sigma") synth.noise_sigma = parse_double(kv);
            else if (key == "d_text") synth.d_text = as_size(kv);
            else if (key == "d_image") synth.d_image_raw = as_size(kv);
            else if (key == "regions") synth.num_regions = as_size(kv);
            else unknown_key(section, key);
        } else {
            throw ConfigError("unknown config section '" + std::string(section) + "'");
        }
    } catch (const FormatError& e) {
        throw ConfigError(e.what());
    }
}

OptimizerConfig RunConfig::optimizer_config() const {
    OptimizerConfig c =
        optimizer == OptimizerKind::Adam ? OptimizerConfig::adam() : OptimizerConfig::adamw();
    if (lr) c.lr = *lr;
    if (weight_decay) c.weight_decay = *weight_decay;
    c.validate();
    return c;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig t;
    t.epochs = epochs;
    t.batch_size = batch_size;
    t.optimizer = optimizer_config();
    t.seed = seed;
    t.plan = plan;
    t.head = head;
    t.mask = mask;
    t.validate();
    return t;
}

void apply_config_text(RunConfig& config, std::string_view text, const std::string& origin) {
    std::vector<KeyValue> entries;
    try {
        entries = parse_key_values(text);
    } catch (const FormatError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    for (const auto& kv : entries) {
        try {
            config.set(kv.section, kv.key, kv.value);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(kv.line) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    apply_config_text(config, text, path.string());
}

}  // namespace hfusion::cli
