#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hfusion/metrics.hpp"
#include "hfusion/trainer.hpp"

namespace hfusion {

/// 0.932 -> "93.20%".
std::string format_percent(double fraction);

/// Plain-text key/value rendering: accuracy and macro-F1 as percentages,
/// followed by a per-class table when `per_class` is set.
std::string render_report(const MetricsReport& report, bool per_class = false);

/// One JSON document; doubles are written with round-trip precision.
std::string report_to_json(const MetricsReport& report);
/// Throws FormatError on malformed input.
MetricsReport report_from_json(std::string_view json);

/// Metrics file written by training: config echo, per-epoch history, best
/// epoch, its validation report and, when given, a test report.
std::string training_summary_json(const TrainConfig& config, const TrainResult& result,
                                  const std::optional<MetricsReport>& test);

}  // namespace hfusion
