#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "benchkit/stats.hpp"

namespace benchkit::report {

enum class Better { Higher, Lower, None };

struct ColumnSpec {
    std::string name;
    /// Metric selector, e.g. "accuracy" or "total_params_m".
    std::string key;
    Better better = Better::None;
    int decimals = 2;
    std::string unit_suffix;
    /// Multiplier applied when the table is built (100 for percentages).
    double scale = 1.0;

    /// Header text: name, plus " (unit)" when a unit is set.
    std::string header() const;
};

struct TableRow {
    std::string model;
    std::string strategy = "-";
    std::vector<double> cells;
};

struct TableGroup {
    std::string category;
    std::vector<TableRow> rows;
};

struct TableModel {
    std::vector<TableGroup> groups;

    std::size_t row_count() const;
};

/// Escapes & % $ # _ { } ~ ^ and backslash. Sequences this function emits are
/// recognized and left alone, so escaping twice equals escaping once.
std::string escape_latex(std::string_view text);

/// Fixed-point text with `decimals` places; never prints "-0.00".
std::string format_fixed(double value, int decimals);

/// best[row][col] over the rows of all groups in order: true when the cell
/// attains its column's optimum. `None` columns are never marked.
std::vector<std::vector<bool>> best_cells(const TableModel& table, std::span<const ColumnSpec> columns);

/// booktabs tabular body with multirow category (and repeated-model) grouping,
/// optimum cells in \textbf, preceded by a commented wrapper suggestion.
std::string render_latex_table(const TableModel& table, std::span<const ColumnSpec> columns);

/// Header `category,model,strategy,<columns>`; cells at full round-trip precision.
std::string render_csv(const TableModel& table, std::span<const ColumnSpec> columns);

/// Inclusive range [first, last] of positions in rank-sorted order.
struct ConnectorGroup {
    std::size_t first = 0;
    std::size_t last = 0;

    bool operator==(const ConnectorGroup&) const = default;
};

/// Maximal runs of consecutive sorted ranks whose spread is <= cd, at least
/// two members each. `sorted_ranks` must be ascending.
std::vector<ConnectorGroup> connector_groups(std::span<const double> sorted_ranks, double cd);

/// Geometry: 800 px wide, 40 px margins, 24 px per label row. Rank 1 sits at
/// the left end of the axis; the better half of the models is labeled on the left.
std::string cd_diagram_svg(std::span<const std::string> model_names, std::span<const double> mean_ranks, double cd);

struct FewShotSummary {
    std::vector<double> episode_accuracies;
    double mean = 0.0;
    /// Population standard deviation (divisor n).
    double std = 0.0;
};

FewShotSummary fewshot_aggregate(std::span<const double> accuracies);

/// "MM.mm±SS.ss" in percent.
std::string format_fewshot(const FewShotSummary& summary);

/// Mean-rank table plus Friedman, Iman–Davenport and Nemenyi lines.
std::string render_friedman_latex(std::span<const std::string> model_names, const stats::FriedmanResult& friedman,
                                  const stats::NemenyiResult& nemenyi);

}  // namespace benchkit::report
