#include "benchkit/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "benchkit/error.hpp"

namespace benchkit::metrics {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), counts_(labels_.size() * labels_.size(), 0) {
    std::set<std::string> unique(labels_.begin(), labels_.end());
    if (unique.size() != labels_.size()) {
        throw ValidationError("confusion matrix labels must be unique");
    }
}

void ConfusionMatrix::add(std::size_t true_class, std::size_t pred_class, std::uint64_t n) {
    counts_[true_class * labels_.size() + pred_class] += n;
    total_ += n;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < size(); ++j) {
        s += at(i, j);
    }
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        s += at(i, j);
    }
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        s += at(i, i);
    }
    return s;
}

std::optional<std::size_t> ConfusionMatrix::find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (labels_ != other.labels_) {
        throw ValidationError("cannot add confusion matrices over different label sets");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
    total_ += other.total_;
    return *this;
}

ConfusionMatrix operator+(ConfusionMatrix lhs, const ConfusionMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

ConfusionMatrix confusion_matrix(std::span<const ingest::PredictionRecord> records,
                                 const std::optional<std::vector<std::string>>& label_order) {
    std::vector<std::string> labels;
    if (label_order) {
        labels = *label_order;
    } else {
        std::set<std::string> observed;
        for (const auto& r : records) {
            observed.insert(r.true_label);
            observed.insert(r.pred_label);
        }
        labels.assign(observed.begin(), observed.end());
    }

    ConfusionMatrix cm(labels);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        index.emplace(labels[i], i);
    }
    auto lookup = [&](const std::string& label, const std::string& sample) {
        auto it = index.find(label);
        if (it == index.end()) {
            throw ValidationError("label '" + label + "' (sample '" + sample + "') is not in the label order");
        }
        return it->second;
    };
    for (const auto& r : records) {
        cm.add(lookup(r.true_label, r.sample_id), lookup(r.pred_label, r.sample_id));
    }
    return cm;
}

MetricsReport summarize(const ConfusionMatrix& cm) {
    if (cm.size() == 0 || cm.total() == 0) {
        throw InvalidArgument("summarize: confusion matrix is empty");
    }
    const std::size_t n = cm.size();
    const double total = static_cast<double>(cm.total());

    MetricsReport report;
    report.total = cm.total();
    report.accuracy = static_cast<double>(cm.trace()) / total;

    double recall_sum = 0.0;
    double precision_sum = 0.0;
    double f1_sum = 0.0;
    double weighted_f1 = 0.0;
    double expected_agreement = 0.0;
    std::size_t supported = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = cm.row_sum(i);
        const auto col = cm.col_sum(i);
        const auto hit = static_cast<double>(cm.at(i, i));

        ClassMetrics c;
        c.label = cm.labels()[i];
        c.support = row;
        c.no_support = row == 0;
        c.no_predictions = col == 0;
        c.recall = row == 0 ? 0.0 : hit / static_cast<double>(row);
        c.precision = col == 0 ? 0.0 : hit / static_cast<double>(col);
        c.f1 = (c.precision + c.recall) == 0.0 ? 0.0 : 2.0 * c.precision * c.recall / (c.precision + c.recall);

        if (!c.no_support) {
            ++supported;
            recall_sum += c.recall;
            precision_sum += c.precision;
            f1_sum += c.f1;
        }
        weighted_f1 += static_cast<double>(row) * c.f1;
        expected_agreement += static_cast<double>(row) * static_cast<double>(col);
        report.per_class.push_back(std::move(c));
    }

    const auto classes = static_cast<double>(supported);
    report.balanced_accuracy = recall_sum / classes;
    report.macro_recall = report.balanced_accuracy;
    report.macro_precision = precision_sum / classes;
    report.macro_f1 = f1_sum / classes;
    report.weighted_f1 = weighted_f1 / total;

    const double p_e = expected_agreement / (total * total);
    report.cohen_kappa = p_e == 1.0 ? 0.0 : (report.accuracy - p_e) / (1.0 - p_e);
    return report;
}

}  // namespace benchkit::metrics
