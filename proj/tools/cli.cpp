#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <deque>
#include <optional>

#include "CLI11.hpp"
#include "hfusion/dataset.hpp"
#include "hfusion/errors.hpp"
#include "hfusion/gradient_suite.hpp"
#include "hfusion/params_file.hpp"
#include "hfusion/report.hpp"
#include "hfusion/split.hpp"
#include "hfusion/synthetic.hpp"
#include "hfusion/trainer.hpp"
#include "hfusion/validate.hpp"
#include "run_config.hpp"

namespace hfusion::cli {
namespace {

/// A flag whose value is routed through RunConfig::set, so flags and config
/// files share one parser.
struct Binding {
    std::string section;
    std::string key;
    std::string value;
    CLI::Option* option = nullptr;
};

class Bindings {
public:
    CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& section,
                     const std::string& key, const std::string& help) {
        auto& b = items_.emplace_back(Binding{section, key, {}, nullptr});
        b.option = app->add_option(flag, b.value, help);
        return b.option;
    }

    void apply(RunConfig& config) const {
        for (const auto& b : items_) {
            if (b.option->count() > 0) config.set(b.section, b.key, b.value);
        }
    }

private:
    std::deque<Binding> items_;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

void add_plan_flags(CLI::App* app, Bindings& b) {
    b.add(app, "--inner", "plan", "inner", "inner slot operator: add, concat, avg");
    b.add(app, "--outer", "plan", "outer", "outer slot operator");
    b.add(app, "--final", "plan", "final", "final slot operator");
}

void add_head_flags(CLI::App* app, Bindings& b) {
    b.add(app, "--variant", "head", "variant", "head variant: basic, dropout, more-layers");
    b.add(app, "--hidden1", "head", "hidden1", "first hidden layer width");
    b.add(app, "--hidden2", "head", "hidden2", "second hidden layer width");
    b.add(app, "--extra", "head", "extra", "extra layer width (more-layers)");
    b.add(app, "--dropout", "head", "dropout", "dropout rate");
    b.add(app, "--kernel", "head", "kernel", "image adapter kernel length (odd)");
}

void add_train_flags(CLI::App* app, Bindings& b) {
    b.add(app, "--epochs", "train", "epochs", "training epochs");
    b.add(app, "--batch-size", "train", "batch_size", "mini-batch size");
    b.add(app, "--optimizer", "train", "optimizer", "adam or adamw");
    b.add(app, "--lr", "train", "lr", "learning rate");
    b.add(app, "--weight-decay", "train", "weight_decay", "weight decay");
    b.add(app, "--mask", "train", "mask",
          "masked modalities: none, text-only, image-only, or a '+' list");
}

void print_dims(const FusionPlan& p, std::ostream& out) {
    out << "inner=" << to_string(p.inner_op) << '\n'
        << "outer=" << to_string(p.outer_op) << '\n'
        << "final=" << to_string(p.final_op) << '\n'
        << "d_text=" << p.d_text_first << '\n'
        << "d_text_second=" << p.d_text_second << '\n'
        << "d_image_raw=" << p.d_image_raw << '\n'
        << "d_branch_first=" << p.d_branch_first << '\n'
        << "d_branch_second=" << p.d_branch_second << '\n'
        << "d_text_fused=" << p.d_text_fused << '\n'
        << "d_adapter=" << p.d_adapter << '\n'
        << "d_fused=" << p.d_fused << '\n';
}

std::string split_summary(const DatasetManifest& m) {
    return "train=" + std::to_string(m.indices_of(Split::Train).size()) +
           " val=" + std::to_string(m.indices_of(Split::Val).size()) +
           " test=" + std::to_string(m.indices_of(Split::Test).size()) +
           " unassigned=" + std::to_string(m.indices_of(Split::Unassigned).size());
}

int run_synth(const RunConfig& c, std::ostream& out) {
    if (c.out.empty()) throw ConfigError("synth needs an output directory (--out)");
    Dataset ds = generate_synthetic(c.synth, c.seed);
    save_dataset(ds, c.out);
    out << "wrote " << ds.size() << " samples, " << c.synth.num_classes() << " classes to "
        << c.out << '\n';
    return kExitOk;
}

int run_split(const RunConfig& c, std::ostream& out) {
    const auto manifest = load_manifest(c.dataset);
    const auto split = split_dataset(manifest, c.test_fraction, c.seed, c.val_fraction);
    save_manifest(split);
    out << split_summary(split) << '\n';
    return kExitOk;
}

int run_validate(const RunConfig& c, std::ostream& out) {
    const auto violations = validate_dataset(c.dataset);
    for (const auto& v : violations) out << format_violation(v) << '\n';
    out << violations.size() << " violation(s)\n";
    return violations.empty() ? kExitOk : kExitFailure;
}

int run_train(const RunConfig& c, bool per_class, std::ostream& out) {
    const TrainConfig tc = c.train_config();
    const Dataset ds = load_dataset(c.dataset);
    const TrainResult result = train(tc, ds);

    for (const auto& e : result.history) {
        out << "epoch " << e.epoch << "/" << tc.epochs << " loss=" << fmt("%.6f", e.train_loss)
            << " val_accuracy=" << format_percent(e.val_accuracy)
            << " val_macro_f1=" << format_percent(e.val_macro_f1) << '\n';
    }
    out << "best epoch: " << result.best_epoch << "\n\n[validation]\n"
        << render_report(result.validation, per_class);

    std::optional<MetricsReport> test;
    const auto test_idx = ds.manifest.indices_of(Split::Test);
    if (!test_idx.empty()) {
        test = evaluate(result.model, ds, test_idx);
        out << "\n[test]\n" << render_report(*test, per_class);
    }
    write_model(c.model, result.model);
    write_text_file(c.metrics, training_summary_json(tc, result, test));
    out << "\nmodel: " << c.model << "\nmetrics: " << c.metrics << '\n';
    return kExitOk;
}

int run_eval(const RunConfig& c, const std::string& split_name, bool per_class,
             const std::string& report_path, std::ostream& out) {
    const Split split = parse_split(split_name);
    const TrainedModel model = read_model(c.model);
    const Dataset ds = load_dataset(c.dataset);
    PlanConfig pc = plan_config_of(model.plan);
    if (plan_for_dataset(pc, ds.manifest.header) != model.plan) {
        throw ShapeError("model dimensions do not match the dataset descriptor");
    }
    const auto idx = ds.manifest.indices_of(split);
    if (idx.empty()) throw ConfigError("split '" + split_name + "' is empty");
    const MetricsReport report = evaluate(model, ds, idx);
    out << "[" << split_name << "]\n" << render_report(report, per_class);
    if (!report_path.empty()) write_text_file(report_path, report_to_json(report));
    return kExitOk;
}

int run_gradcheck(GradientSuiteConfig gc, std::uint64_t seed, std::ostream& out) {
    gc.seed = seed;
    bool all = true;
    double worst = 0.0;
    std::size_t passed = 0;
    const auto cases = gradient_suite_cases();
    for (const auto& which : cases) {
        const auto r = run_gradient_case(gc, which);
        all = all && r.passed;
        passed += r.passed ? 1 : 0;
        worst = std::max(worst, r.check.max_rel_error);
        out << to_string(which.inner) << "/" << to_string(which.outer) << "/"
            << to_string(which.final_op) << " " << to_string(which.variant)
            << " max_rel_error=" << fmt("%.3e", r.check.max_rel_error)
            << " checked=" << r.check.checked << " skipped=" << r.check.skipped_nonsmooth << ' '
            << (r.passed ? "ok" : "FAIL") << '\n';
        if (!r.passed) {
            out << "  worst: " << r.check.worst_block << "[" << r.check.worst_index
                << "] analytic=" << fmt("%.9e", r.check.worst_analytic)
                << " numeric=" << fmt("%.9e", r.check.worst_numeric) << '\n';
        }
    }
    out << "gradcheck: " << passed << "/" << cases.size()
        << " cases passed, max relative error " << fmt("%.3e", worst) << " (tolerance "
        << fmt("%.0e", gc.tolerance) << ")\n";
    return all ? kExitOk : kExitFailure;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical multimodal fusion classifier", "hfusion"};
    app.require_subcommand(1);
    app.fallthrough();

    Bindings bind;
    std::string config_path;
    app.add_option("--config", config_path,
                   std::string("config file (default: $") + kConfigEnvVar + ")");
    bind.add(&app, "--seed", "", "seed", "master seed");

    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    bind.add(synth, "--out", "paths", "out", "output directory");
    bind.add(synth, "--n-coarse", "synth", "n_coarse", "coarse categories (text signal)");
    bind.add(synth, "--n-fine", "synth", "n_fine", "fine categories (image signal)");
    bind.add(synth, "--samples-per-class", "synth", "samples_per_class", "samples per class");
    bind.add(synth, "--sigma", "synth", "sigma", "noise standard deviation");
    bind.add(synth, "--d-text", "synth", "d_text", "text embedding dim");
    bind.add(synth, "--d-image", "synth", "d_image", "image region dim");
    bind.add(synth, "--regions", "synth", "regions", "regions per image");

    auto* split = app.add_subcommand("split", "assign stratified train/val/test splits");
    bind.add(split, "dataset", "paths", "dataset", "dataset directory or descriptor");
    bind.add(split, "--test-fraction", "split", "test_fraction", "test fraction per class");
    bind.add(split, "--val-fraction", "split", "val_fraction",
             "validation fraction of the remainder");

    auto* validate = app.add_subcommand("validate", "check a dataset for violations");
    bind.add(validate, "dataset", "paths", "dataset", "dataset directory or descriptor");

    bool per_class = false;
    auto* trainc = app.add_subcommand("train", "train a model");
    bind.add(trainc, "dataset", "paths", "dataset", "dataset directory or descriptor");
    add_plan_flags(trainc, bind);
    add_head_flags(trainc, bind);
    add_train_flags(trainc, bind);
    bind.add(trainc, "--model", "paths", "model", "output model file");
    bind.add(trainc, "--metrics", "paths", "metrics", "output metrics file (JSON)");
    trainc->add_flag("--per-class", per_class, "print per-class metrics");

    std::string eval_split = "test";
    std::string report_path;
    auto* evalc = app.add_subcommand("eval", "evaluate a trained model");
    bind.add(evalc, "dataset", "paths", "dataset", "dataset directory or descriptor");
    bind.add(evalc, "--model", "paths", "model", "model file");
    evalc->add_option("--split", eval_split, "split to evaluate: train, val, test");
    evalc->add_option("--report", report_path, "write the metrics as JSON");
    evalc->add_flag("--per-class", per_class, "print per-class metrics");

    GradientSuiteConfig gc;
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of every plan");
    gradcheck->add_option("--eps", gc.eps, "central difference step")->capture_default_str();
    gradcheck->add_option("--tolerance", gc.tolerance, "maximum relative error")
        ->capture_default_str();
    gradcheck->add_option("--batch", gc.batch, "samples per check")->capture_default_str();

    auto* dims = app.add_subcommand("dims", "print the dimensions of a fusion plan");
    add_plan_flags(dims, bind);
    bind.add(dims, "--d-text", "plan", "d_text", "text embedding dim");
    bind.add(dims, "--d-text-second", "plan", "d_text_second",
             "second text encoder dim (default: d-text)");
    bind.add(dims, "--d-image", "plan", "d_image", "raw image dim");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::string message = e.what();
        if (app.get_subcommands().empty()) {
            for (std::size_t i = 0; i < args.size(); ++i) {
                const bool is_value = i > 0 && (args[i - 1] == "--config" || args[i - 1] == "--seed");
                if (!args[i].empty() && args[i][0] != '-' && !is_value) {
                    message = "unknown subcommand '" + args[i] + "'";
                    break;
                }
            }
        }
        err << "error: " << message << "\n\n" << app.help();
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        RunConfig config;
        if (config_path.empty()) {
            if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
                config_path = env;
            }
        }
        if (!config_path.empty()) apply_config_file(config, config_path);
        bind.apply(config);

        const bool needs_dataset = sub == split || sub == validate || sub == trainc || sub == evalc;
        if (needs_dataset && config.dataset.empty()) {
            err << "error: " << sub->get_name() << " needs a dataset path\n\n" << sub->help();
            return kExitUsage;
        }

        if (sub == synth) return run_synth(config, out);
        if (sub == split) return run_split(config, out);
        if (sub == validate) return run_validate(config, out);
        if (sub == trainc) return run_train(config, per_class, out);
        if (sub == evalc) return run_eval(config, eval_split, per_class, report_path, out);
        if (sub == gradcheck) return run_gradcheck(gc, config.seed, out);
        print_dims(build_plan(config.plan), out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace hfusion::cli
