#include "benchkit/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "benchkit/csv.hpp"
#include "benchkit/error.hpp"

namespace benchkit::report {

std::string ColumnSpec::header() const {
    return unit_suffix.empty() ? name : name + " (" + unit_suffix + ")";
}

std::size_t TableModel::row_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) {
        n += g.rows.size();
    }
    return n;
}

namespace {

constexpr std::array<std::string_view, 3> kEscapeTokens = {"\\textbackslash{}", "\\textasciitilde{}",
                                                           "\\textasciicircum{}"};

bool is_escapable(char c) {
    return c == '&' || c == '%' || c == '$' || c == '#' || c == '_' || c == '{' || c == '}';
}

void check_arity(const TableModel& table, std::span<const ColumnSpec> columns) {
    for (const auto& g : table.groups) {
        for (const auto& row : g.rows) {
            if (row.cells.size() != columns.size()) {
                throw ValidationError("row '" + row.model + "' has " + std::to_string(row.cells.size()) +
                                      " cells for " + std::to_string(columns.size()) + " columns");
            }
        }
    }
    for (const auto& c : columns) {
        if (c.decimals < 0) {
            throw ValidationError("column '" + c.name + "' has negative decimals");
        }
    }
}

}  // namespace

std::string escape_latex(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\\') {
            if (i + 1 < text.size() && is_escapable(text[i + 1])) {
                out.append(text.substr(i, 2));
                i += 2;
                continue;
            }
            bool matched = false;
            for (auto token : kEscapeTokens) {
                if (text.substr(i, token.size()) == token) {
                    out.append(token);
                    i += token.size();
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                out.append(kEscapeTokens[0]);
                ++i;
            }
            continue;
        }
        if (is_escapable(c)) {
            out.push_back('\\');
            out.push_back(c);
        } else if (c == '~') {
            out.append(kEscapeTokens[1]);
        } else if (c == '^') {
            out.append(kEscapeTokens[2]);
        } else {
            out.push_back(c);
        }
        ++i;
    }
    return out;
}

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) {
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    }
    std::array<char, 512> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, value);
    std::string s(buf.data());
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

std::vector<std::vector<bool>> best_cells(const TableModel& table, std::span<const ColumnSpec> columns) {
    check_arity(table, columns);
    std::vector<const TableRow*> rows;
    for (const auto& g : table.groups) {
        for (const auto& r : g.rows) {
            rows.push_back(&r);
        }
    }
    std::vector<std::vector<bool>> best(rows.size(), std::vector<bool>(columns.size(), false));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].better == Better::None || rows.empty()) {
            continue;
        }
        const bool higher = columns[c].better == Better::Higher;
        double optimum = higher ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        for (const auto* r : rows) {
            const double v = r->cells[c];
            if (std::isnan(v)) {
                continue;
            }
            optimum = higher ? std::max(optimum, v) : std::min(optimum, v);
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            best[i][c] = rows[i]->cells[c] == optimum;
        }
    }
    return best;
}

std::string render_latex_table(const TableModel& table, std::span<const ColumnSpec> columns) {
    if (table.row_count() == 0) {
        throw ValidationError("cannot render an empty table");
    }
    const auto best = best_cells(table, columns);
    const auto ncols = columns.size() + 3;

    std::string colspec = "lll";
    colspec.append(columns.size(), 'r');

    std::string out;
    out += "% Requires \\usepackage{booktabs,multirow,adjustbox}. Suggested wrapper:\n";
    out += "% \\begin{table}[htbp]\n";
    out += "% \\centering\n";
    out += "% \\scriptsize\n";
    out += "% \\begin{adjustbox}{center}\n";
    out += "% \\begin{tabular}{" + colspec + "}\n";
    out += "\\toprule\n";
    out += "Category & Model & Strategy";
    for (const auto& c : columns) {
        out += " & " + escape_latex(c.header());
    }
    out += " \\\\\n";

    std::size_t flat = 0;
    for (const auto& group : table.groups) {
        if (group.rows.empty()) {
            continue;
        }
        out += "\\midrule\n";
        std::size_t i = 0;
        while (i < group.rows.size()) {
            // Consecutive rows of one model share a multirow model cell.
            std::size_t block_end = i + 1;
            while (block_end < group.rows.size() && group.rows[block_end].model == group.rows[i].model) {
                ++block_end;
            }
            const auto block = block_end - i;
            if (i > 0) {
                const bool prev_multi = i >= 2 && group.rows[i - 1].model == group.rows[i - 2].model;
                if (block > 1 || prev_multi) {
                    out += "\\cmidrule(lr){2-" + std::to_string(ncols) + "}\n";
                }
            }
            for (std::size_t r = i; r < block_end; ++r, ++flat) {
                const auto& row = group.rows[r];
                if (r == 0) {
                    out += group.rows.size() > 1 ? "\\multirow{" + std::to_string(group.rows.size()) + "}{*}{" +
                                                       escape_latex(group.category) + "}"
                                                 : escape_latex(group.category);
                }
                out += " & ";
                if (r == i) {
                    out += block > 1 ? "\\multirow{" + std::to_string(block) + "}{*}{" + escape_latex(row.model) + "}"
                                     : escape_latex(row.model);
                }
                out += " & " + escape_latex(row.strategy);
                for (std::size_t c = 0; c < columns.size(); ++c) {
                    const auto text = format_fixed(row.cells[c], columns[c].decimals);
                    out += " & " + (best[flat][c] ? "\\textbf{" + text + "}" : text);
                }
                out += " \\\\\n";
            }
            i = block_end;
        }
    }
    out += "\\bottomrule\n";
    out += "% \\end{tabular}\n";
    out += "% \\end{adjustbox}\n";
    out += "% \\end{table}\n";
    return out;
}

std::string render_csv(const TableModel& table, std::span<const ColumnSpec> columns) {
    check_arity(table, columns);
    std::vector<std::string> header = {"category", "model", "strategy"};
    for (const auto& c : columns) {
        header.push_back(c.header());
    }
    std::string out = csv::format_row(header) + "\n";
    for (const auto& group : table.groups) {
        for (const auto& row : group.rows) {
            std::vector<std::string> fields = {group.category, row.model, row.strategy};
            for (double v : row.cells) {
                fields.push_back(csv::format_exact(v));
            }
            out += csv::format_row(fields) + "\n";
        }
    }
    return out;
}

FewShotSummary fewshot_aggregate(std::span<const double> accuracies) {
    if (accuracies.empty()) {
        throw InvalidArgument("few-shot aggregation needs at least one episode");
    }
    FewShotSummary s;
    s.episode_accuracies.assign(accuracies.begin(), accuracies.end());
    double sum = 0.0;
    for (double a : accuracies) {
        sum += a;
    }
    const double n = static_cast<double>(accuracies.size());
    s.mean = sum / n;
    double ss = 0.0;
    for (double a : accuracies) {
        ss += (a - s.mean) * (a - s.mean);
    }
    s.std = std::sqrt(ss / n);
    return s;
}

std::string format_fewshot(const FewShotSummary& summary) {
    return format_fixed(100.0 * summary.mean, 2) + "\u00B1" + format_fixed(100.0 * summary.std, 2);
}

namespace {

std::string format_p(double p) {
    if (p < 1e-4) {
        return "< 0.0001";
    }
    return "= " + format_fixed(p, 4);
}

}  // namespace

std::string render_friedman_latex(std::span<const std::string> model_names, const stats::FriedmanResult& friedman,
                                  const stats::NemenyiResult& nemenyi) {
    if (model_names.size() != friedman.mean_ranks.size()) {
        throw ValidationError("model names and mean ranks differ in length");
    }
    const double best = *std::min_element(friedman.mean_ranks.begin(), friedman.mean_ranks.end());
    std::string out;
    out += "% Requires \\usepackage{booktabs}.\n";
    out += "\\begin{tabular}{lr}\n\\toprule\nModel & Mean rank \\\\\n\\midrule\n";
    for (std::size_t i = 0; i < model_names.size(); ++i) {
        const auto text = format_fixed(friedman.mean_ranks[i], 2);
        out += escape_latex(model_names[i]) + " & " +
               (friedman.mean_ranks[i] == best ? "\\textbf{" + text + "}" : text) + " \\\\\n";
    }
    out += "\\midrule\n";
    out += "\\multicolumn{2}{l}{Friedman $\\chi^2(" + std::to_string(friedman.df) + ") = " +
           format_fixed(friedman.chi2, 3) + "$, $p " + format_p(friedman.p_value) + "$" +
           (friedman.tie_corrected ? " (tie-corrected)" : "") + "} \\\\\n";
    if (friedman.iman_davenport_f) {
        out += "\\multicolumn{2}{l}{Iman--Davenport $F(" + std::to_string(friedman.iman_davenport_df1) + ", " +
               std::to_string(friedman.iman_davenport_df2) + ") = " + format_fixed(*friedman.iman_davenport_f, 3) +
               "$, $p " + format_p(*friedman.iman_davenport_p) + "$} \\\\\n";
    }
    out += "\\multicolumn{2}{l}{Nemenyi CD ($\\alpha = " + csv::format_exact(nemenyi.alpha) +
           "$, $q_\\alpha = " + format_fixed(nemenyi.q_alpha, 3) + "$) $= " +
           format_fixed(nemenyi.critical_difference, 3) + "$} \\\\\n";
    out += "\\bottomrule\n\\end{tabular}\n";
    return out;
}

}  // namespace benchkit::report
