#include "hfusion/report.hpp"

#include <cstdio>
#include <sstream>

#include "hfusion/errors.hpp"
#include "json.hpp"

namespace hfusion {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
    return buf;
}

std::string render_report(const MetricsReport& report, bool per_class) {
    std::ostringstream os;
    os << "accuracy: " << format_percent(report.accuracy) << '\n'
       << "macro_f1: " << format_percent(report.macro_f1) << '\n'
       << "samples: " << report.confusion.total() << '\n';
    if (per_class) {
        char line[128];
        std::snprintf(line, sizeof line, "%-6s %10s %10s %10s %8s\n", "class", "precision",
                      "recall", "f1", "support");
        os << line;
        for (std::size_t c = 0; c < report.per_class.size(); ++c) {
            const auto& m = report.per_class[c];
            std::snprintf(line, sizeof line, "%-6zu %10s %10s %10s %8llu\n", c,
                          format_percent(m.precision).c_str(), format_percent(m.recall).c_str(),
                          format_percent(m.f1).c_str(),
                          static_cast<unsigned long long>(m.support));
            os << line;
        }
    }
    return os.str();
}

namespace {

ordered_json to_json(const MetricsReport& r) {
    ordered_json j;
    j["accuracy"] = r.accuracy;
    j["macro_f1"] = r.macro_f1;
    ordered_json classes = ordered_json::array();
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& m = r.per_class[c];
        classes.push_back({{"class", c},
                           {"precision", m.precision},
                           {"recall", m.recall},
                           {"f1", m.f1},
                           {"support", m.support},
                           {"present", m.present}});
    }
    j["per_class"] = std::move(classes);
    const std::size_t n = r.confusion.num_classes();
    ordered_json rows = ordered_json::array();
    for (std::size_t t = 0; t < n; ++t) {
        ordered_json row = ordered_json::array();
        for (std::size_t p = 0; p < n; ++p) row.push_back(r.confusion.at(t, p));
        rows.push_back(std::move(row));
    }
    j["confusion"] = std::move(rows);
    j["loss_curve"] = r.loss_curve;
    return j;
}

MetricsReport from_json(const json& j) {
    MetricsReport r;
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    for (const auto& c : j.at("per_class")) {
        ClassMetrics m;
        m.precision = c.at("precision").get<double>();
        m.recall = c.at("recall").get<double>();
        m.f1 = c.at("f1").get<double>();
        m.support = c.at("support").get<std::uint64_t>();
        m.present = c.at("present").get<bool>();
        r.per_class.push_back(m);
    }
    const auto& rows = j.at("confusion");
    const std::size_t n = rows.size();
    std::vector<std::uint64_t> counts;
    counts.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) throw FormatError("confusion matrix is not square", 0);
        for (const auto& v : row) counts.push_back(v.get<std::uint64_t>());
    }
    r.confusion = ConfusionMatrix(n, std::move(counts));
    r.loss_curve = j.at("loss_curve").get<std::vector<double>>();
    return r;
}

}  // namespace

std::string report_to_json(const MetricsReport& report) { return to_json(report).dump(2) + "\n"; }

MetricsReport report_from_json(std::string_view text) {
    try {
        return from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed metrics JSON: ") + e.what(), 0);
    }
}

std::string training_summary_json(const TrainConfig& config, const TrainResult& result,
                                  const std::optional<MetricsReport>& test) {
    const auto& plan = result.model.plan;
    ordered_json j;
    j["config"] = {
        {"epochs", config.epochs},
        {"batch_size", config.batch_size},
        {"optimizer", std::string(to_string(config.optimizer.kind))},
        {"lr", config.optimizer.lr},
        {"weight_decay", config.optimizer.weight_decay},
        {"seed", config.seed},
        {"inner", std::string(to_string(plan.inner_op))},
        {"outer", std::string(to_string(plan.outer_op))},
        {"final", std::string(to_string(plan.final_op))},
        {"variant", std::string(to_string(config.head.variant))},
        {"mask", to_string(config.mask)},
        {"d_fused", plan.d_fused},
    };
    ordered_json history = ordered_json::array();
    for (const auto& e : result.history) {
        history.push_back({{"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"val_accuracy", e.val_accuracy},
                           {"val_macro_f1", e.val_macro_f1}});
    }
    j["history"] = std::move(history);
    j["best_epoch"] = result.best_epoch;
    j["validation"] = to_json(result.validation);
    if (test) j["test"] = to_json(*test);
    return j.dump(2) + "\n";
}

}  // namespace hfusion
