#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace benchkit::stats {

enum class Direction { HigherBetter, LowerBetter };

/// N blocks (folds) by k models, row-major.
class ScoreTable {
public:
    ScoreTable(std::vector<std::string> models, std::vector<double> scores, Direction direction);

    const std::vector<std::string>& models() const { return models_; }
    std::size_t blocks() const { return scores_.size() / models_.size(); }
    std::size_t treatments() const { return models_.size(); }
    Direction direction() const { return direction_; }
    double at(std::size_t block, std::size_t model) const { return scores_[block * models_.size() + model]; }

private:
    std::vector<std::string> models_;
    std::vector<double> scores_;
    Direction direction_;
};

/// Reads a score CSV: first column `fold`, one column per model.
ScoreTable parse_score_csv(std::string_view text, Direction direction);

/// Within-block ranks, 1 = best, ties share the mean of the ranks they span.
class RankMatrix {
public:
    RankMatrix(std::size_t blocks, std::size_t treatments, std::vector<double> ranks);

    std::size_t blocks() const { return blocks_; }
    std::size_t treatments() const { return treatments_; }
    double at(std::size_t block, std::size_t model) const { return ranks_[block * treatments_ + model]; }
    std::span<const double> row(std::size_t block) const {
        return {ranks_.data() + block * treatments_, treatments_};
    }
    std::vector<double> mean_ranks() const;

private:
    std::size_t blocks_;
    std::size_t treatments_;
    std::vector<double> ranks_;
};

RankMatrix rank_matrix(const ScoreTable& table);

struct FriedmanResult {
    std::size_t blocks = 0;
    std::size_t treatments = 0;
    /// Tie-corrected statistic when ties exist, otherwise equal to chi2_uncorrected.
    double chi2 = 0.0;
    double chi2_uncorrected = 0.0;
    int df = 0;
    double p_value = 1.0;
    double p_value_uncorrected = 1.0;
    bool tie_corrected = false;
    /// Unset when N(k-1) - chi2 <= 0.
    std::optional<double> iman_davenport_f;
    std::optional<double> iman_davenport_p;
    int iman_davenport_df1 = 0;
    int iman_davenport_df2 = 0;
    std::vector<double> mean_ranks;
};

FriedmanResult friedman(const RankMatrix& ranks);

struct NemenyiResult {
    double alpha = 0.05;
    double q_alpha = 0.0;
    double critical_difference = 0.0;
    /// k*k, row-major; |R_i - R_j| > CD.
    std::vector<bool> significant;
    std::size_t treatments = 0;

    bool is_significant(std::size_t i, std::size_t j) const { return significant[i * treatments + j]; }
};

/// CD = q_alpha * sqrt(k (k + 1) / (6 N)).
double critical_difference(std::size_t treatments, std::size_t blocks, double alpha);

NemenyiResult nemenyi(std::span<const double> mean_ranks, std::size_t blocks, double alpha);

}  // namespace benchkit::stats
