#include <map>
#include <set>

#include "benchkit/cli.hpp"
#include "benchkit/csv.hpp"
#include "benchkit/error.hpp"

namespace benchkit::cli {

std::vector<report::ColumnSpec> default_columns() {
    using report::Better;
    return {
        {"Accuracy", "accuracy", Better::Higher, 2, "%", 100.0},
        {"Balanced Acc", "balanced_accuracy", Better::Higher, 2, "%", 100.0},
        {"F1 Macro", "macro_f1", Better::Higher, 2, "%", 100.0},
        {"Recall", "macro_recall", Better::Higher, 2, "%", 100.0},
        {"Precision", "macro_precision", Better::Higher, 2, "%", 100.0},
        {"Total Params", "total_params_m", Better::Lower, 2, "M", 1.0},
        {"Train Params", "train_params_m", Better::Lower, 2, "M", 1.0},
        {"Epoch Time", "epoch_time_s", Better::Lower, 2, "s", 1.0},
    };
}

namespace {

const config::ConfigNode& require(const config::ConfigNode& entry, const char* key, std::size_t index) {
    const auto* node = entry.find(key);
    if (node == nullptr) {
        throw ValidationError("column " + std::to_string(index) + ": missing '" + key + "'");
    }
    return *node;
}

std::string as_string(const config::ConfigNode& node, const char* what) {
    if (node.is_scalar() && std::holds_alternative<std::string>(node.as_scalar())) {
        return std::get<std::string>(node.as_scalar());
    }
    throw ValidationError(std::string("column field '") + what + "' must be a string");
}

double as_number(const config::ConfigNode& node, const char* what) {
    if (node.is_scalar()) {
        if (const auto* i = std::get_if<std::int64_t>(&node.as_scalar())) {
            return static_cast<double>(*i);
        }
        if (const auto* d = std::get_if<double>(&node.as_scalar())) {
            return *d;
        }
    }
    throw ValidationError(std::string("column field '") + what + "' must be a number");
}

}  // namespace

std::vector<report::ColumnSpec> parse_column_specs(const config::ConfigNode& node) {
    const config::ConfigNode* list = &node;
    if (node.is_mapping()) {
        list = node.find("columns");
        if (list == nullptr) {
            throw ValidationError("column spec mapping has no 'columns' list");
        }
    }
    if (!list->is_sequence()) {
        throw ValidationError("column spec must be a list of columns");
    }
    std::vector<report::ColumnSpec> columns;
    std::size_t index = 0;
    for (const auto& entry : list->as_sequence()) {
        if (!entry.is_mapping()) {
            throw ValidationError("column " + std::to_string(index) + ": expected a mapping");
        }
        report::ColumnSpec c;
        c.name = as_string(require(entry, "name", index), "name");
        c.key = as_string(require(entry, "key", index), "key");
        if (const auto* b = entry.find("better")) {
            const auto text = as_string(*b, "better");
            if (text == "higher") {
                c.better = report::Better::Higher;
            } else if (text == "lower") {
                c.better = report::Better::Lower;
            } else if (text == "none") {
                c.better = report::Better::None;
            } else {
                throw ValidationError("column '" + c.name + "': better must be higher, lower or none");
            }
        }
        if (const auto* d = entry.find("decimals")) {
            const double v = as_number(*d, "decimals");
            if (v < 0 || v != static_cast<int>(v)) {
                throw ValidationError("column '" + c.name + "': decimals must be a non-negative integer");
            }
            c.decimals = static_cast<int>(v);
        }
        if (const auto* u = entry.find("unit")) {
            c.unit_suffix = as_string(*u, "unit");
        }
        if (const auto* s = entry.find("scale")) {
            c.scale = as_number(*s, "scale");
        }
        columns.push_back(std::move(c));
        ++index;
    }
    if (columns.empty()) {
        throw ValidationError("column spec lists no columns");
    }
    return columns;
}

namespace {

std::vector<std::string> run_labels(const ingest::Run& run) {
    std::set<std::string> labels;
    for (const auto& fold : run.folds) {
        for (const auto& r : fold.predictions) {
            labels.insert(r.true_label);
            labels.insert(r.pred_label);
        }
    }
    return {labels.begin(), labels.end()};
}

double report_value(const metrics::MetricsReport& m, const std::string& key) {
    static const std::map<std::string, double metrics::MetricsReport::*> fields = {
        {"accuracy", &metrics::MetricsReport::accuracy},
        {"balanced_accuracy", &metrics::MetricsReport::balanced_accuracy},
        {"macro_f1", &metrics::MetricsReport::macro_f1},
        {"weighted_f1", &metrics::MetricsReport::weighted_f1},
        {"macro_precision", &metrics::MetricsReport::macro_precision},
        {"macro_recall", &metrics::MetricsReport::macro_recall},
        {"cohen_kappa", &metrics::MetricsReport::cohen_kappa},
    };
    if (auto it = fields.find(key); it != fields.end()) {
        return m.*(it->second);
    }
    const auto colon = key.find(':');
    if (colon != std::string::npos) {
        const auto kind = key.substr(0, colon);
        const auto label = key.substr(colon + 1);
        for (const auto& c : m.per_class) {
            if (c.label != label) {
                continue;
            }
            if (kind == "recall") {
                return c.recall;
            }
            if (kind == "precision") {
                return c.precision;
            }
            if (kind == "f1") {
                return c.f1;
            }
        }
        if (kind == "recall" || kind == "precision" || kind == "f1") {
            throw ValidationError("metric selector '" + key + "': label not present in the run");
        }
    }
    throw ValidationError("unknown metric selector '" + key + "'");
}

}  // namespace

double select_metric(const ingest::Run& run, const std::string& key, Aggregate aggregate) {
    if (key == "total_params_m") {
        return run.meta.total_params_millions;
    }
    if (key == "train_params_m") {
        return run.meta.trainable_params_millions;
    }
    if (key == "epoch_time_s") {
        return run.meta.epoch_time_seconds;
    }
    if (run.folds.empty()) {
        throw ValidationError("run '" + run.meta.model_name + "' has no folds");
    }
    const auto labels = run_labels(run);
    if (aggregate == Aggregate::Pooled) {
        metrics::ConfusionMatrix pooled(labels);
        for (const auto& fold : run.folds) {
            pooled += metrics::confusion_matrix(fold.predictions, labels);
        }
        return report_value(metrics::summarize(pooled), key);
    }
    double sum = 0.0;
    for (const auto& fold : run.folds) {
        sum += report_value(metrics::summarize(metrics::confusion_matrix(fold.predictions, labels)), key);
    }
    return sum / static_cast<double>(run.folds.size());
}

report::TableModel build_comparison_table(const ingest::ExperimentIndex& index,
                                          std::span<const report::ColumnSpec> columns, Aggregate aggregate) {
    report::TableModel table;
    std::map<std::string, std::size_t> group_of;
    for (const auto& run : index.runs) {
        auto [it, inserted] = group_of.emplace(run.meta.category, table.groups.size());
        if (inserted) {
            table.groups.push_back({run.meta.category, {}});
        }
        report::TableRow row;
        row.model = run.meta.model_name;
        row.strategy = run.meta.strategy;
        for (const auto& c : columns) {
            row.cells.push_back(c.scale * select_metric(run, c.key, aggregate));
        }
        table.groups[it->second].rows.push_back(std::move(row));
    }
    return table;
}

std::vector<double> parse_episode_file(std::string_view text) {
    auto rows = csv::parse(text);
    if (rows.empty()) {
        throw ParseError("episode file is empty");
    }
    std::size_t column = 0;
    std::size_t first = 0;
    const auto& head = rows.front().fields;
    bool numeric_first = true;
    try {
        csv::parse_double(head.at(0), rows.front().line, "accuracy");
    } catch (const ParseError&) {
        numeric_first = false;
    }
    if (!numeric_first) {
        csv::Header header(rows.front());
        column = header.index("accuracy");
        first = 1;
    }
    std::vector<double> values;
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (column >= row.fields.size()) {
            throw ParseError("missing accuracy field", row.line);
        }
        const double v = csv::parse_double(row.fields[column], row.line, "accuracy");
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParseError("episode accuracy must be a fraction in [0, 1]", row.line);
        }
        values.push_back(v);
    }
    return values;
}

}  // namespace benchkit::cli
