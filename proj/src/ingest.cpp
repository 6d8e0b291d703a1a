#include "benchkit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <unordered_set>

#include "json.hpp"

#include "benchkit/csv.hpp"
#include "benchkit/error.hpp"

namespace benchkit::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(ws);
    return std::string(s.substr(first, last - first + 1));
}

std::string required_string(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(std::string("missing field '") + key + "'", line);
    }
    if (!it->is_string()) {
        throw ParseError(std::string("field '") + key + "' must be a string", line);
    }
    auto value = trim(it->get<std::string>());
    if (value.empty()) {
        throw ParseError(std::string("field '") + key + "' is empty", line);
    }
    return value;
}

double required_number(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(std::string("meta.json: missing key '") + key + "'");
    }
    if (!it->is_number()) {
        throw ParseError(std::string("meta.json: key '") + key + "' must be a number");
    }
    return it->get<double>();
}

}  // namespace

std::vector<PredictionRecord> parse_prediction_file(std::string_view text) {
    std::vector<PredictionRecord> records;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            if (end == text.size()) {
                break;
            }
            continue;
        }

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) {
            throw ParseError("expected a JSON object", line_no);
        }
        PredictionRecord rec{required_string(obj, "sample_id", line_no), required_string(obj, "true", line_no),
                             required_string(obj, "pred", line_no)};
        if (!seen.insert(rec.sample_id).second) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate sample_id '" + rec.sample_id + "'");
        }
        records.push_back(std::move(rec));
        if (end == text.size()) {
            break;
        }
    }
    return records;
}

std::string serialize_predictions(std::span<const PredictionRecord> records) {
    std::string out;
    for (const auto& r : records) {
        // nlohmann sorts object keys, so the line is assembled by hand.
        out += "{\"sample_id\":" + json(r.sample_id).dump() + ",\"true\":" + json(r.true_label).dump() +
               ",\"pred\":" + json(r.pred_label).dump() + "}\n";
    }
    return out;
}

std::vector<EpochMetrics> parse_epochs_csv(std::string_view text) {
    auto rows = csv::parse(text);
    if (rows.empty()) {
        throw ParseError("epochs.csv: missing header");
    }
    csv::Header header(rows.front());
    const auto epoch_col = header.index("epoch");
    const auto acc_col = header.index("val_accuracy");

    std::vector<EpochMetrics> log;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.names().size()) {
            throw ParseError("expected " + std::to_string(header.names().size()) + " fields, got " +
                                 std::to_string(row.fields.size()),
                             row.line);
        }
        EpochMetrics m;
        m.epoch = csv::parse_integer(row.fields[epoch_col], row.line, "epoch");
        m.val_accuracy = csv::parse_double(row.fields[acc_col], row.line, "val_accuracy");
        if (m.epoch < 0) {
            throw ParseError("epoch must be non-negative", row.line);
        }
        if (!(m.val_accuracy >= 0.0 && m.val_accuracy <= 1.0)) {
            throw ParseError("val_accuracy must lie in [0, 1]", row.line);
        }
        for (std::size_t c = 0; c < row.fields.size(); ++c) {
            if (c == epoch_col || c == acc_col) {
                continue;
            }
            const auto& name = header.names()[c];
            m.extra.emplace_back(name, csv::parse_double(row.fields[c], row.line, name));
        }
        if (!log.empty() && m.epoch <= log.back().epoch) {
            throw ValidationError("line " + std::to_string(row.line) + ": epochs must be strictly increasing (" +
                                  std::to_string(m.epoch) + " after " + std::to_string(log.back().epoch) + ")");
        }
        log.push_back(std::move(m));
    }
    return log;
}

RunMeta parse_run_meta(std::string_view text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("meta.json: invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) {
        throw ParseError("meta.json: expected a JSON object");
    }
    RunMeta meta;
    auto text_field = [&](const char* key, bool required) -> std::string {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) {
                throw ParseError(std::string("meta.json: missing key '") + key + "'");
            }
            return {};
        }
        if (!it->is_string()) {
            throw ParseError(std::string("meta.json: key '") + key + "' must be a string");
        }
        return it->get<std::string>();
    };
    meta.model_name = text_field("model", true);
    meta.strategy = text_field("strategy", true);
    meta.category = text_field("category", true);
    meta.total_params_millions = required_number(obj, "total_params_m");
    meta.trainable_params_millions = required_number(obj, "train_params_m");
    meta.epoch_time_seconds = required_number(obj, "epoch_time_s");

    for (double v : {meta.total_params_millions, meta.trainable_params_millions, meta.epoch_time_seconds}) {
        if (!(std::isfinite(v) && v >= 0.0)) {
            throw ValidationError("meta.json: parameter counts and epoch time must be finite and non-negative");
        }
    }
    if (meta.trainable_params_millions > meta.total_params_millions) {
        throw ValidationError("meta.json: train_params_m exceeds total_params_m for model '" + meta.model_name + "'");
    }
    return meta;
}

long long select_best_epoch(std::span<const EpochMetrics> log) {
    if (log.empty()) {
        throw InvalidArgument("select_best_epoch: empty epoch log");
    }
    const EpochMetrics* best = &log.front();
    for (const auto& m : log) {
        if (m.val_accuracy > best->val_accuracy ||
            (m.val_accuracy == best->val_accuracy && m.epoch < best->epoch)) {
            best = &m;
        }
    }
    return best->epoch;
}

namespace {

std::optional<int> fold_number(std::string_view name) {
    constexpr std::string_view prefix = "fold_";
    if (name.substr(0, prefix.size()) != prefix || name.size() == prefix.size()) {
        return std::nullopt;
    }
    auto digits = name.substr(prefix.size());
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || value < 0) {
        return std::nullopt;
    }
    return value;
}

FoldRun load_fold(const fs::path& dir, int index, const FileSystem& fs) {
    FoldRun fold;
    fold.fold_index = index;
    const auto pred_path = dir / "predictions.jsonl";
    if (!fs.exists(pred_path)) {
        throw IoError("missing predictions file: " + pred_path.generic_string());
    }
    try {
        fold.predictions = parse_prediction_file(fs.read_file(pred_path));
    } catch (const ParseError& e) {
        throw ParseError(pred_path.generic_string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(pred_path.generic_string() + ": " + e.what());
    }
    const auto epochs_path = dir / "epochs.csv";
    if (fs.exists(epochs_path)) {
        try {
            fold.epochs = parse_epochs_csv(fs.read_file(epochs_path));
        } catch (const ParseError& e) {
            throw ParseError(epochs_path.generic_string() + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(epochs_path.generic_string() + ": " + e.what());
        }
        if (!fold.epochs.empty()) {
            fold.best_epoch = select_best_epoch(fold.epochs);
        }
    }
    return fold;
}

}  // namespace

ScanResult scan_experiment_dir(const fs::path& root, const FileSystem& fs) {
    if (!fs.is_directory(root)) {
        throw IoError("experiment directory not found: " + root.generic_string());
    }
    ScanResult result;
    auto name = root.filename();
    if (name.empty()) {
        name = root.parent_path().filename();
    }
    result.index.dataset_name = name.string();

    for (const auto& model_dir_name : fs.list_directory(root)) {
        const auto model_dir = root / model_dir_name;
        if (!fs.is_directory(model_dir)) {
            continue;
        }
        const auto meta_path = model_dir / "meta.json";
        if (!fs.exists(meta_path)) {
            throw IoError("missing run metadata: " + meta_path.generic_string());
        }
        Run run;
        try {
            run.meta = parse_run_meta(fs.read_file(meta_path));
        } catch (const ParseError& e) {
            throw ParseError(meta_path.generic_string() + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(meta_path.generic_string() + ": " + e.what());
        }

        std::vector<std::pair<int, fs::path>> fold_dirs;
        for (const auto& entry : fs.list_directory(model_dir)) {
            auto index = fold_number(entry);
            if (index && fs.is_directory(model_dir / entry)) {
                fold_dirs.emplace_back(*index, model_dir / entry);
            }
        }
        std::sort(fold_dirs.begin(), fold_dirs.end());
        for (std::size_t i = 1; i < fold_dirs.size(); ++i) {
            if (fold_dirs[i].first == fold_dirs[i - 1].first) {
                throw ValidationError("duplicate fold index " + std::to_string(fold_dirs[i].first) + " under " +
                                      model_dir.generic_string());
            }
        }
        if (fold_dirs.empty()) {
            throw ValidationError("run has no fold_<i> directories: " + model_dir.generic_string());
        }

        // Folds parse independently; results are collected in index order.
        std::vector<std::future<FoldRun>> pending;
        pending.reserve(fold_dirs.size());
        for (const auto& [index, dir] : fold_dirs) {
            pending.push_back(std::async(std::launch::async, load_fold, dir, index, std::cref(fs)));
        }
        for (auto& f : pending) {
            run.folds.push_back(f.get());
        }
        for (const auto& fold : run.folds) {
            if (!fold.best_epoch) {
                result.warnings.push_back(model_dir_name + "/fold_" + std::to_string(fold.fold_index) +
                                          ": no epochs.csv, best-epoch selection skipped");
            }
        }
        result.index.runs.push_back(std::move(run));
    }
    if (result.index.runs.empty()) {
        result.warnings.push_back("no model directories found under " + root.generic_string());
    }
    return result;
}

}  // namespace benchkit::ingest
