#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "benchkit/ingest.hpp"

namespace benchkit::metrics {

/// counts(i, j) = samples of true class i predicted as class j.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> labels);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    std::uint64_t total() const { return total_; }

    std::uint64_t at(std::size_t true_class, std::size_t pred_class) const {
        return counts_[true_class * labels_.size() + pred_class];
    }
    void add(std::size_t true_class, std::size_t pred_class, std::uint64_t n = 1);

    std::uint64_t row_sum(std::size_t i) const;
    std::uint64_t col_sum(std::size_t j) const;
    std::uint64_t trace() const;

    /// Index of `label`, or nullopt.
    std::optional<std::size_t> find(const std::string& label) const;

    /// Elementwise sum; label lists must be identical.
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

ConfusionMatrix operator+(ConfusionMatrix lhs, const ConfusionMatrix& rhs);

struct ClassMetrics {
    std::string label;
    std::uint64_t support = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// No true samples: recall reported as 0, class left out of macro averages.
    bool no_support = false;
    /// Never predicted: precision reported as 0.
    bool no_predictions = false;
};

struct MetricsReport {
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
    double macro_f1 = 0.0;
    double weighted_f1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double cohen_kappa = 0.0;
    std::uint64_t total = 0;
    std::vector<ClassMetrics> per_class;
};

/// Tallies records into a matrix. Without `label_order` the label set is the
/// sorted union of observed labels; with it, any other label is a ValidationError.
ConfusionMatrix confusion_matrix(std::span<const ingest::PredictionRecord> records,
                                 const std::optional<std::vector<std::string>>& label_order = std::nullopt);

/// Full metric suite. Macro averages (and balanced accuracy) run over classes
/// with non-zero support; weighted F1 is support-weighted over all classes.
MetricsReport summarize(const ConfusionMatrix& cm);

}  // namespace benchkit::metrics
