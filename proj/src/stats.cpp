#include "benchkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "benchkit/csv.hpp"
#include "benchkit/error.hpp"
#include "benchkit/special_functions.hpp"

namespace benchkit::stats {

ScoreTable::ScoreTable(std::vector<std::string> models, std::vector<double> scores, Direction direction)
    : models_(std::move(models)), scores_(std::move(scores)), direction_(direction) {
    if (models_.size() < 2) {
        throw ValidationError("score table needs at least 2 models, got " + std::to_string(models_.size()));
    }
    if (scores_.size() % models_.size() != 0) {
        throw ValidationError("score table has a ragged row");
    }
    if (blocks() < 2) {
        throw ValidationError("score table needs at least 2 blocks, got " + std::to_string(blocks()));
    }
}

ScoreTable parse_score_csv(std::string_view text, Direction direction) {
    auto rows = csv::parse(text);
    if (rows.empty()) {
        throw ParseError("score table: missing header");
    }
    csv::Header header(rows.front());
    const auto& names = header.names();
    if (names.empty() || names.front() != "fold") {
        throw ParseError("score table: first column must be 'fold'", rows.front().line);
    }
    std::vector<std::string> models(names.begin() + 1, names.end());
    std::vector<double> scores;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != names.size()) {
            throw ParseError("expected " + std::to_string(names.size()) + " fields, got " +
                                 std::to_string(row.fields.size()),
                             row.line);
        }
        for (std::size_t c = 1; c < row.fields.size(); ++c) {
            scores.push_back(csv::parse_double(row.fields[c], row.line, names[c]));
        }
    }
    return ScoreTable(std::move(models), std::move(scores), direction);
}

RankMatrix::RankMatrix(std::size_t blocks, std::size_t treatments, std::vector<double> ranks)
    : blocks_(blocks), treatments_(treatments), ranks_(std::move(ranks)) {
    if (ranks_.size() != blocks_ * treatments_) {
        throw ValidationError("rank matrix dimensions do not match its data");
    }
}

std::vector<double> RankMatrix::mean_ranks() const {
    std::vector<double> means(treatments_, 0.0);
    for (std::size_t b = 0; b < blocks_; ++b) {
        for (std::size_t j = 0; j < treatments_; ++j) {
            means[j] += at(b, j);
        }
    }
    for (auto& m : means) {
        m /= static_cast<double>(blocks_);
    }
    return means;
}

RankMatrix rank_matrix(const ScoreTable& table) {
    const auto n = table.blocks();
    const auto k = table.treatments();
    std::vector<double> ranks(n * k);
    std::vector<std::size_t> order(k);

    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(table.at(b, j))) {
                throw ValidationError("non-finite score at block " + std::to_string(b) + ", model '" +
                                      table.models()[j] + "'");
            }
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto better = [&](std::size_t x, std::size_t y) {
            return table.direction() == Direction::HigherBetter ? table.at(b, x) > table.at(b, y)
                                                                : table.at(b, x) < table.at(b, y);
        };
        std::stable_sort(order.begin(), order.end(), better);

        std::size_t start = 0;
        while (start < k) {
            std::size_t end = start + 1;
            while (end < k && table.at(b, order[end]) == table.at(b, order[start])) {
                ++end;
            }
            // Positions start..end-1 hold ranks start+1..end; their mean:
            const double shared = 0.5 * static_cast<double>(start + 1 + end);
            for (std::size_t p = start; p < end; ++p) {
                ranks[b * k + order[p]] = shared;
            }
            start = end;
        }
    }
    return RankMatrix(n, k, std::move(ranks));
}

FriedmanResult friedman(const RankMatrix& ranks) {
    const auto n = ranks.blocks();
    const auto k = ranks.treatments();
    if (n < 2 || k < 2) {
        throw ValidationError("Friedman test needs at least 2 blocks and 2 models");
    }
    const double N = static_cast<double>(n);
    const double K = static_cast<double>(k);

    FriedmanResult r;
    r.blocks = n;
    r.treatments = k;
    r.df = static_cast<int>(k) - 1;
    r.mean_ranks = ranks.mean_ranks();

    double sum_sq = 0.0;
    for (double m : r.mean_ranks) {
        sum_sq += m * m;
    }
    r.chi2_uncorrected = std::max(0.0, 12.0 * N / (K * (K + 1.0)) * (sum_sq - K * (K + 1.0) * (K + 1.0) / 4.0));

    // Tie groups show up as equal ranks within a row.
    double tie_sum = 0.0;
    std::vector<double> sorted(k);
    for (std::size_t b = 0; b < n; ++b) {
        auto row = ranks.row(b);
        std::copy(row.begin(), row.end(), sorted.begin());
        std::sort(sorted.begin(), sorted.end());
        std::size_t start = 0;
        while (start < k) {
            std::size_t end = start + 1;
            while (end < k && sorted[end] == sorted[start]) {
                ++end;
            }
            const double t = static_cast<double>(end - start);
            tie_sum += t * t * t - t;
            start = end;
        }
    }
    const double correction = 1.0 - tie_sum / (N * K * (K * K - 1.0));

    r.p_value_uncorrected = special::chi2_sf(r.chi2_uncorrected, r.df);
    r.iman_davenport_df1 = r.df;
    r.iman_davenport_df2 = r.df * (static_cast<int>(n) - 1);
    if (correction <= 0.0) {
        r.chi2 = 0.0;
        r.p_value = 1.0;
        r.tie_corrected = true;
        r.iman_davenport_f = 0.0;
        r.iman_davenport_p = 1.0;
        return r;
    }
    r.tie_corrected = tie_sum > 0.0;
    r.chi2 = r.chi2_uncorrected / correction;
    r.p_value = special::chi2_sf(r.chi2, r.df);

    const double denominator = N * (K - 1.0) - r.chi2;
    if (denominator > 0.0) {
        r.iman_davenport_f = (N - 1.0) * r.chi2 / denominator;
        r.iman_davenport_p = special::f_sf(*r.iman_davenport_f, r.iman_davenport_df1, r.iman_davenport_df2);
    }
    return r;
}

double critical_difference(std::size_t treatments, std::size_t blocks, double alpha) {
    if (treatments < 2 || blocks < 2) {
        throw InvalidArgument("critical difference needs k >= 2 and N >= 2");
    }
    const double k = static_cast<double>(treatments);
    const double q = special::studentized_range_quantile(static_cast<int>(treatments), alpha);
    return q * std::sqrt(k * (k + 1.0) / (6.0 * static_cast<double>(blocks)));
}

NemenyiResult nemenyi(std::span<const double> mean_ranks, std::size_t blocks, double alpha) {
    const auto k = mean_ranks.size();
    if (k < 2 || blocks < 2) {
        throw InvalidArgument("Nemenyi test needs k >= 2 mean ranks and N >= 2 blocks");
    }
    NemenyiResult r;
    r.alpha = alpha;
    r.treatments = k;
    r.q_alpha = special::studentized_range_quantile(static_cast<int>(k), alpha);
    r.critical_difference = critical_difference(k, blocks, alpha);
    r.significant.assign(k * k, false);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            r.significant[i * k + j] = i != j && std::abs(mean_ranks[i] - mean_ranks[j]) > r.critical_difference;
        }
    }
    return r;
}

}  // namespace benchkit::stats
