#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "benchkit/filesystem.hpp"

namespace benchkit::ingest {

/// One sample's outcome at a fold's best epoch.
struct PredictionRecord {
    std::string sample_id;
    std::string true_label;
    std::string pred_label;

    bool operator==(const PredictionRecord&) const = default;
};

struct EpochMetrics {
    long long epoch = 0;
    double val_accuracy = 0.0;
    /// Extra CSV columns, in file order.
    std::vector<std::pair<std::string, double>> extra;

    bool operator==(const EpochMetrics&) const = default;
};

struct RunMeta {
    std::string model_name;
    std::string strategy = "-";
    std::string category;
    double total_params_millions = 0.0;
    double trainable_params_millions = 0.0;
    double epoch_time_seconds = 0.0;

    bool operator==(const RunMeta&) const = default;
};

struct FoldRun {
    int fold_index = 0;
    std::vector<PredictionRecord> predictions;
    std::vector<EpochMetrics> epochs;
    /// Set when an epochs.csv was present.
    std::optional<long long> best_epoch;

    bool operator==(const FoldRun&) const = default;
};

struct Run {
    RunMeta meta;
    std::vector<FoldRun> folds;

    bool operator==(const Run&) const = default;
};

struct ExperimentIndex {
    std::string dataset_name;
    std::vector<Run> runs;

    bool operator==(const ExperimentIndex&) const = default;
};

struct ScanResult {
    ExperimentIndex index;
    std::vector<std::string> warnings;
};

/// Parses predictions.jsonl. Blank lines are skipped; malformed lines throw
/// ParseError with the line number, a repeated sample_id throws ValidationError.
std::vector<PredictionRecord> parse_prediction_file(std::string_view text);

/// Canonical JSONL with keys in `sample_id`, `true`, `pred` order.
std::string serialize_predictions(std::span<const PredictionRecord> records);

/// Parses epochs.csv (`epoch`, `val_accuracy`, any further numeric columns).
/// Epochs must be strictly increasing.
std::vector<EpochMetrics> parse_epochs_csv(std::string_view text);

RunMeta parse_run_meta(std::string_view text);

/// Epoch with the highest validation accuracy; ties go to the smallest epoch.
/// Independent of the order of `log`.
long long select_best_epoch(std::span<const EpochMetrics> log);

/// Builds the index for `<root>/<model>/{meta.json, fold_<i>/{predictions.jsonl, epochs.csv}}`.
/// Model directories are visited in name order and folds sorted by index.
ScanResult scan_experiment_dir(const std::filesystem::path& root, const FileSystem& fs);

}  // namespace benchkit::ingest
