#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hfusion/fusion.hpp"
#include "hfusion/model.hpp"
#include "hfusion/optimizer.hpp"
#include "hfusion/synthetic.hpp"
#include "hfusion/trainer.hpp"

namespace hfusion::cli {

inline constexpr const char* kConfigEnvVar = "HFUSION_CONFIG";

/// Everything a subcommand can be configured with. Sources are layered:
/// defaults, then the config file, then command-line flags.
///
///   seed = 42
///   [paths]  dataset, out, model, metrics
///   [plan]   inner, outer, final, d_text, d_text_second, d_image
///   [head]   variant, hidden1, hidden2, extra, dropout, kernel
///   [train]  epochs, batch_size, optimizer, lr, weight_decay, mask
///   [split]  test_fraction, val_fraction
///   [synth]  n_coarse, n_fine, samples_per_class, sigma, d_text, d_image, regions
struct RunConfig {
    std::uint64_t seed = 0;

    std::string dataset;
    std::string out;
    std::string model = "model.mmpm";
    std::string metrics = "metrics.json";

    PlanConfig plan;
    HeadConfig head;

    std::size_t epochs = 20;
    std::size_t batch_size = 32;
    OptimizerKind optimizer = OptimizerKind::Adam;
    /// Unset values fall back to the optimizer preset.
    std::optional<double> lr;
    std::optional<double> weight_decay;
    ModalityMask mask;

    double test_fraction = 0.1;
    double val_fraction = 0.1;

    SyntheticSpec synth;

    /// Sets `section.key`; an empty section means top level. Throws
    /// ConfigError for unknown keys or unparsable values.
    void set(std::string_view section, std::string_view key, std::string_view value);

    OptimizerConfig optimizer_config() const;
    TrainConfig train_config() const;
};

/// Applies every entry of a config file. Errors name the file and line.
void apply_config_text(RunConfig& config, std::string_view text, const std::string& origin);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

}  // namespace hfusion::cli
