#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "benchkit/config.hpp"
#include "benchkit/ingest.hpp"
#include "benchkit/metrics.hpp"
#include "benchkit/report.hpp"

namespace benchkit::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kInputError = 2,
    kInternalError = 3,
};

/// Entry point behind the `benchkit` binary; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum class Aggregate { FoldMean, Pooled };

/// Comparison table columns matching the usual accuracy/params/time layout.
std::vector<report::ColumnSpec> default_columns();

/// Column list from a YAML/JSON tree: a sequence of entries, or a mapping
/// with a `columns` sequence. Entry keys: name, key, better, decimals, unit, scale.
std::vector<report::ColumnSpec> parse_column_specs(const config::ConfigNode& node);

/// Value of one metric selector for a run. Selectors: accuracy,
/// balanced_accuracy, macro_f1, weighted_f1, macro_precision, macro_recall,
/// cohen_kappa, total_params_m, train_params_m, epoch_time_s, and
/// recall:<label>, precision:<label>, f1:<label>.
double select_metric(const ingest::Run& run, const std::string& key, Aggregate aggregate);

/// One row per run, grouped by category in order of first appearance;
/// cells are scaled by each column's `scale`.
report::TableModel build_comparison_table(const ingest::ExperimentIndex& index,
                                          std::span<const report::ColumnSpec> columns, Aggregate aggregate);

std::string metrics_to_json(const metrics::MetricsReport& report, const metrics::ConfusionMatrix& cm);

/// Episode accuracies: a CSV with an `accuracy` column, or one number per line.
std::vector<double> parse_episode_file(std::string_view text);

}  // namespace benchkit::cli
