#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "benchkit/cli.hpp"
#include "benchkit/error.hpp"
#include "benchkit/filesystem.hpp"
#include "benchkit/splits.hpp"
#include "benchkit/stats.hpp"

namespace benchkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string metrics_to_json(const metrics::MetricsReport& report, const metrics::ConfusionMatrix& cm) {
    json j;
    j["total"] = report.total;
    j["accuracy"] = report.accuracy;
    j["balanced_accuracy"] = report.balanced_accuracy;
    j["macro_f1"] = report.macro_f1;
    j["weighted_f1"] = report.weighted_f1;
    j["macro_precision"] = report.macro_precision;
    j["macro_recall"] = report.macro_recall;
    j["cohen_kappa"] = report.cohen_kappa;
    auto per_class = json::array();
    for (const auto& c : report.per_class) {
        per_class.push_back({{"label", c.label},
                             {"support", c.support},
                             {"precision", c.precision},
                             {"recall", c.recall},
                             {"f1", c.f1},
                             {"no_support", c.no_support},
                             {"no_predictions", c.no_predictions}});
    }
    j["per_class"] = per_class;
    j["labels"] = cm.labels();
    auto counts = json::array();
    for (std::size_t i = 0; i < cm.size(); ++i) {
        auto row = json::array();
        for (std::size_t k = 0; k < cm.size(); ++k) {
            row.push_back(cm.at(i, k));
        }
        counts.push_back(row);
    }
    j["confusion_matrix"] = counts;
    return j.dump(2) + "\n";
}

namespace {

struct Context {
    std::ostream& out;
    std::ostream& err;
    DiskFileSystem disk;
};

void emit(Context& ctx, const std::string& path, const std::string& contents) {
    if (path.empty() || path == "-") {
        ctx.out << contents;
    } else {
        write_file_atomic(path, contents);
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        items.push_back(item);
    }
    return items;
}

int cmd_metrics(Context& ctx, const std::string& predictions, const std::string& labels) {
    const auto records = ingest::parse_prediction_file(ctx.disk.read_file(predictions));
    std::optional<std::vector<std::string>> order;
    if (!labels.empty()) {
        order = split_list(labels);
    }
    const auto cm = metrics::confusion_matrix(records, order);
    const auto report = metrics::summarize(cm);
    for (const auto& c : report.per_class) {
        if (c.no_support) {
            ctx.err << "warning: class '" << c.label << "' has no true samples\n";
        } else if (c.no_predictions) {
            ctx.err << "warning: class '" << c.label << "' is never predicted; precision set to 0\n";
        }
    }
    ctx.out << metrics_to_json(report, cm);
    return kSuccess;
}

struct CompareOptions {
    std::string scores;
    double alpha = 0.05;
    std::string direction = "higher";
    std::string out_json;
    std::string out_latex;
    std::string out_svg;
};

int cmd_compare(Context& ctx, const CompareOptions& o) {
    const auto direction = o.direction == "lower" ? stats::Direction::LowerBetter : stats::Direction::HigherBetter;
    const auto table = stats::parse_score_csv(ctx.disk.read_file(o.scores), direction);
    const auto ranks = stats::rank_matrix(table);
    const auto fr = stats::friedman(ranks);
    const auto nm = stats::nemenyi(fr.mean_ranks, table.blocks(), o.alpha);
    const auto k = table.treatments();

    json j;
    j["models"] = table.models();
    j["blocks"] = table.blocks();
    j["direction"] = o.direction;
    j["mean_ranks"] = fr.mean_ranks;
    json friedman_json = {{"chi2", fr.chi2},
                          {"chi2_uncorrected", fr.chi2_uncorrected},
                          {"df", fr.df},
                          {"p_value", fr.p_value},
                          {"p_value_uncorrected", fr.p_value_uncorrected},
                          {"tie_corrected", fr.tie_corrected}};
    if (fr.iman_davenport_f) {
        friedman_json["iman_davenport"] = {{"F", *fr.iman_davenport_f},
                                           {"df1", fr.iman_davenport_df1},
                                           {"df2", fr.iman_davenport_df2},
                                           {"p_value", *fr.iman_davenport_p}};
    } else {
        friedman_json["iman_davenport"] = nullptr;
    }
    j["friedman"] = friedman_json;
    auto significant = json::array();
    for (std::size_t a = 0; a < k; ++a) {
        auto row = json::array();
        for (std::size_t b = 0; b < k; ++b) {
            row.push_back(nm.is_significant(a, b));
        }
        significant.push_back(row);
    }
    j["nemenyi"] = {{"alpha", nm.alpha},
                    {"q_alpha", nm.q_alpha},
                    {"critical_difference", nm.critical_difference},
                    {"significant", significant}};
    j["omnibus"] = {{"test", "friedman"}, {"p_value", fr.p_value}, {"reject_at_alpha", fr.p_value < o.alpha}};

    emit(ctx, o.out_json, j.dump(2) + "\n");
    if (!o.out_latex.empty()) {
        emit(ctx, o.out_latex, report::render_friedman_latex(table.models(), fr, nm));
    }
    if (!o.out_svg.empty()) {
        emit(ctx, o.out_svg, report::cd_diagram_svg(table.models(), fr.mean_ranks, nm.critical_difference));
    }
    return kSuccess;
}

struct SplitOptions {
    std::string manifest;
    std::optional<int> k;
    std::optional<double> train_frac;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_split(Context& ctx, const SplitOptions& o) {
    const auto manifest = splits::parse_manifest_csv(ctx.disk.read_file(o.manifest));
    json j;
    if (o.k) {
        const auto plan = splits::stratified_kfold(manifest, *o.k, o.seed);
        for (const auto& w : plan.warnings) {
            ctx.err << "warning: " << w << "\n";
        }
        j["folds"] = plan.fold_of;
    } else {
        const auto plan = splits::stratified_holdout(manifest, *o.train_frac, o.seed);
        j["train"] = plan.train_ids;
        j["test"] = plan.test_ids;
    }
    emit(ctx, o.out, j.dump(2) + "\n");
    return kSuccess;
}

struct TableOptions {
    std::string exp_dir;
    std::string columns;
    std::string aggregate = "mean";
    std::string out_latex;
    std::string out_csv;
};

int cmd_table(Context& ctx, const TableOptions& o) {
    const auto scan = ingest::scan_experiment_dir(o.exp_dir, ctx.disk);
    for (const auto& w : scan.warnings) {
        ctx.err << "warning: " << w << "\n";
    }
    if (scan.index.runs.empty()) {
        throw ValidationError("no runs found under " + o.exp_dir);
    }
    const auto columns =
        o.columns.empty() ? default_columns() : parse_column_specs(config::load_config(o.columns, ctx.disk));
    const auto table = build_comparison_table(scan.index, columns,
                                              o.aggregate == "pooled" ? Aggregate::Pooled : Aggregate::FoldMean);
    const auto latex = report::render_latex_table(table, columns);
    const auto csv_text = report::render_csv(table, columns);
    if (o.out_latex.empty() && o.out_csv.empty()) {
        ctx.out << latex;
        return kSuccess;
    }
    if (!o.out_latex.empty()) {
        emit(ctx, o.out_latex, latex);
    }
    if (!o.out_csv.empty()) {
        emit(ctx, o.out_csv, csv_text);
    }
    return kSuccess;
}

int cmd_fewshot(Context& ctx, const std::string& episodes, const std::string& out_json) {
    const auto values = parse_episode_file(ctx.disk.read_file(episodes));
    const auto summary = report::fewshot_aggregate(values);
    const auto line = report::format_fewshot(summary);
    ctx.out << line << "\n";
    if (!out_json.empty()) {
        json j = {{"episodes", values.size()},
                  {"accuracies", values},
                  {"mean", summary.mean},
                  {"std", summary.std},
                  {"std_convention", "population (divisor n)"},
                  {"formatted", line}};
        emit(ctx, out_json, j.dump(2) + "\n");
    }
    return kSuccess;
}

int cmd_config_resolve(Context& ctx, const std::string& path, const std::string& get) {
    const auto cfg = config::load_config(path, ctx.disk);
    if (!get.empty()) {
        auto node = config::get_path(cfg, get);
        if (!node) {
            throw ValidationError("no value at '" + get + "'");
        }
        ctx.out << config::to_canonical_json(*node) << "\n";
        return kSuccess;
    }
    ctx.out << config::to_canonical_json(cfg) << "\n";
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx{out, err, {}};

    CLI::App app{"Statistical comparison and reporting for model evaluation logs", "benchkit"};
    app.require_subcommand(1);

    std::string predictions;
    std::string labels;
    auto* metrics_cmd = app.add_subcommand("metrics", "Compute the metric suite for a predictions.jsonl file");
    metrics_cmd->add_option("predictions", predictions, "Path to predictions.jsonl")->required();
    metrics_cmd->add_option("--labels", labels, "Comma-separated label order (default: sorted observed labels)");

    CompareOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "Friedman/Nemenyi analysis of a per-fold score table");
    compare_cmd->add_option("scores", compare.scores, "CSV with a 'fold' column and one column per model")
        ->required();
    compare_cmd->add_option("--alpha", compare.alpha, "Significance level for the Nemenyi test")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    compare_cmd->add_option("--direction", compare.direction, "Whether higher or lower scores are better")
        ->check(CLI::IsMember({"higher", "lower"}))
        ->capture_default_str();
    compare_cmd->add_option("--out-json", compare.out_json, "Result JSON path (default: stdout)");
    compare_cmd->add_option("--out-latex", compare.out_latex, "LaTeX summary fragment path");
    compare_cmd->add_option("--out-svg", compare.out_svg, "Critical-difference diagram path");

    SplitOptions split;
    int k_value = 0;
    double frac_value = 0.0;
    auto* split_cmd = app.add_subcommand("split", "Stratified K-fold or holdout plan from a manifest.csv");
    split_cmd->add_option("manifest", split.manifest, "CSV with header sample_id,label")->required();
    auto* k_opt = split_cmd->add_option("--k", k_value, "Number of folds (K >= 2)");
    auto* frac_opt = split_cmd->add_option("--train-frac", frac_value, "Train fraction for a holdout split");
    k_opt->excludes(frac_opt);
    split_cmd->add_option("--seed", split.seed, "Seed for the deterministic shuffle")->required();
    split_cmd->add_option("--out", split.out, "Plan JSON path (default: stdout)");

    TableOptions table;
    auto* table_cmd = app.add_subcommand("table", "LaTeX and CSV comparison table from an experiment directory");
    table_cmd->add_option("--exp-dir", table.exp_dir, "Experiment root: <root>/<model>/fold_<i>/...")->required();
    table_cmd->add_option("--columns", table.columns, "Column spec (YAML or JSON); default: accuracy/params/time");
    table_cmd->add_option("--aggregate", table.aggregate, "Fold aggregation: mean of per-fold metrics, or pooled")
        ->check(CLI::IsMember({"mean", "pooled"}))
        ->capture_default_str();
    table_cmd->add_option("--out-latex", table.out_latex, "LaTeX output path");
    table_cmd->add_option("--out-csv", table.out_csv, "CSV output path");

    std::string episodes;
    std::string fewshot_json;
    auto* fewshot_cmd = app.add_subcommand("fewshot", "mean±std over few-shot episode accuracies");
    fewshot_cmd->add_option("episodes", episodes, "CSV with an 'accuracy' column, or one value per line")
        ->required();
    fewshot_cmd->add_option("--out-json", fewshot_json, "Summary JSON path");

    std::string config_path;
    std::string config_get;
    auto* config_cmd = app.add_subcommand("config", "Configuration utilities");
    config_cmd->require_subcommand(1);
    auto* resolve_cmd = config_cmd->add_subcommand("resolve", "Resolve _base_ inheritance and print canonical JSON");
    resolve_cmd->add_option("path", config_path, "YAML config file")->required();
    resolve_cmd->add_option("--get", config_get, "Print only the value at a dotted path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*metrics_cmd) {
            return cmd_metrics(ctx, predictions, labels);
        }
        if (*compare_cmd) {
            return cmd_compare(ctx, compare);
        }
        if (*split_cmd) {
            if (k_opt->count() == 0 && frac_opt->count() == 0) {
                err << "split: one of --k or --train-frac is required\n";
                return kUsageError;
            }
            if (k_opt->count() != 0) {
                split.k = k_value;
            } else {
                split.train_frac = frac_value;
            }
            return cmd_split(ctx, split);
        }
        if (*table_cmd) {
            return cmd_table(ctx, table);
        }
        if (*fewshot_cmd) {
            return cmd_fewshot(ctx, episodes, fewshot_json);
        }
        if (*resolve_cmd) {
            return cmd_config_resolve(ctx, config_path, config_get);
        }
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kUsageError;
}

}  // namespace benchkit::cli
