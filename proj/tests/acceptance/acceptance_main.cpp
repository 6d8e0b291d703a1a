// One line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "benchkit/cli.hpp"
#include "benchkit/config.hpp"
#include "benchkit/csv.hpp"
#include "benchkit/ingest.hpp"
#include "benchkit/metrics.hpp"
#include "benchkit/report.hpp"
#include "benchkit/splits.hpp"
#include "benchkit/stats.hpp"
#include "support/config_gen.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace benchkit;
using nlohmann::json;

namespace {

struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
    void near(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: got %.10g, want %.10g +- %g", what.c_str(), got, want, tol);
            failures.emplace_back(buf);
        }
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

fs::path golden_dir = BENCHKIT_GOLDEN_DIR;
bool update_golden = false;

// ---- 1, 2: metric fixtures

void fixture_metrics(Check& c, const std::vector<fixtures::ClassOutcome>& outcomes, double acc, double bal) {
    const auto tmp = fs::temp_directory_path() / "benchkit_accept_metrics.jsonl";
    spit(tmp, ingest::serialize_predictions(fixtures::records_for(outcomes)));
    std::ostringstream out, err;
    const int code = cli::run({"metrics", tmp.string()}, out, err);
    fs::remove(tmp);
    c.expect(code == 0, "metrics exit code " + std::to_string(code) + ": " + err.str());
    if (code != 0) {
        return;
    }
    const auto j = json::parse(out.str());
    c.near(100 * j["accuracy"].get<double>(), acc, 0.01, "accuracy %");
    c.near(100 * j["balanced_accuracy"].get<double>(), bal, 0.01, "balanced accuracy %");
}

void criterion1(Check& c) { fixture_metrics(c, fixtures::pointnet_outcomes(), 51.08, 46.02); }
void criterion2(Check& c) { fixture_metrics(c, fixtures::pointnet2_msg_outcomes(), 67.63, 65.24); }

// ---- 3: holdout counts

void criterion3(Check& c) {
    const auto manifest = fixtures::manifest_from_totals(fixtures::tree_species_class_totals());
    const auto plan = splits::stratified_holdout(manifest, 0.8, 2024);
    std::map<std::string, int> train;
    for (const auto& id : plan.train_ids) {
        ++train[id.substr(0, id.rfind('_'))];
    }
    for (const auto& [label, n] : fixtures::tree_species_train_counts()) {
        c.expect(train[label] == n, label + " train " + std::to_string(train[label]) + " != " + std::to_string(n));
    }
    // Oak: 18 train + 4 printed test = 22, but the class has 23 samples; the split gives 18/5.
    c.expect(train["Eiche"] + 4 != 23, "Oak erratum no longer reproduces");
    c.expect(plan.train_ids.size() + plan.test_ids.size() == manifest.size(), "holdout lost samples");
}

// ---- 4: Friedman closed forms

stats::FriedmanResult friedman_of(const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> models;
    for (std::size_t j = 0; j < rows[0].size(); ++j) {
        models.push_back("m" + std::to_string(j));
    }
    std::vector<double> flat;
    for (const auto& r : rows) {
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return stats::friedman(stats::rank_matrix(stats::ScoreTable(models, flat, stats::Direction::HigherBetter)));
}

void criterion4(Check& c) {
    const auto sweep = friedman_of(std::vector<std::vector<double>>(5, {0.9, 0.1}));
    c.expect(sweep.chi2 == 5.0, "clean sweep chi2 is not exactly 5");
    c.near(sweep.p_value, 0.02535, 5e-5, "clean sweep p");
    c.near(sweep.p_value, std::erfc(std::sqrt(5.0 / 2.0)), 1e-12, "clean sweep p vs normal identity");
    const auto tied = friedman_of(std::vector<std::vector<double>>(5, {0.5, 0.5, 0.5}));
    c.expect(tied.chi2 == 0.0, "all-tied chi2 != 0");
    c.expect(tied.p_value == 1.0, "all-tied p != 1");
}

// ---- 5: Nemenyi

void criterion5(Check& c) {
    // k = 2: the range of two normals is half-normal, so q = z with 2 Phi(z) - 1 = 0.95
    double lo = 0, hi = 5;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (2 * oracle::phi_cdf(mid) - 1 < 0.95 ? lo : hi) = mid;
    }
    const double q2 = stats::critical_difference(2, 6, 0.05) / std::sqrt(2.0 * 3.0 / 36.0);
    c.near(q2, lo, 5e-4, "q(2, 0.05)");
    auto q_of = [](std::size_t k) {
        const double kk = static_cast<double>(k);
        return stats::critical_difference(k, 1000, 0.05) / std::sqrt(kk * (kk + 1) / 6000.0);
    };
    c.near(q_of(3), 2.343, 2e-3, "q(3, 0.05)");
    c.near(q_of(3), oracle::nemenyi_q(3, 0.05), 2e-3, "q(3, 0.05) vs quadrature");
    c.near(q_of(10), oracle::nemenyi_q(10, 0.05), 2e-3, "q(10, 0.05) vs quadrature");
    c.near(stats::critical_difference(2, 10, 0.05), 0.6198, 1e-3, "CD(2, 10, 0.05)");
}

// ---- 6: property suites

constexpr int kCases = 250;

void prop_metric_identities(Check& c, std::mt19937_64& rng) {
    for (int t = 0; t < kCases; ++t) {
        const int classes = 2 + static_cast<int>(rng() % 6);
        std::vector<ingest::PredictionRecord> records;
        std::vector<std::pair<int, int>> samples;
        const auto n = 1 + rng() % 80;
        for (std::size_t i = 0; i < n; ++i) {
            const int a = static_cast<int>(rng() % classes), p = static_cast<int>(rng() % classes);
            samples.emplace_back(a, p);
            records.push_back({"s" + std::to_string(i), "c" + std::to_string(a), "c" + std::to_string(p)});
        }
        std::vector<std::string> labels;
        for (int k = 0; k < classes; ++k) {
            labels.push_back("c" + std::to_string(k));
        }
        const auto r = metrics::summarize(metrics::confusion_matrix(records, labels));
        double weighted_recall = 0, macro_recall = 0;
        int supported = 0;
        for (const auto& pc : r.per_class) {
            weighted_recall += static_cast<double>(pc.support) * pc.recall / static_cast<double>(n);
            if (pc.support > 0) {
                macro_recall += pc.recall;
                ++supported;
            }
        }
        macro_recall /= supported;
        const auto o = oracle::metrics_from_samples(samples, classes);
        c.near(r.accuracy, weighted_recall, 1e-12, "accuracy = weighted recall");
        c.near(r.balanced_accuracy, macro_recall, 1e-12, "balanced = macro recall");
        c.near(r.accuracy, o.accuracy, 1e-12, "accuracy vs oracle");
        c.near(r.balanced_accuracy, o.balanced, 1e-12, "balanced vs oracle");
    }
}

std::vector<std::vector<double>> random_rows(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    const bool coarse = rng() % 2 == 0;
    for (auto& r : rows) {
        for (auto& v : r) {
            v = coarse ? static_cast<double>(rng() % 4) : std::uniform_real_distribution<double>(0, 1)(rng);
        }
    }
    return rows;
}

stats::RankMatrix ranks_of(const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> models;
    for (std::size_t j = 0; j < rows[0].size(); ++j) {
        models.push_back("m" + std::to_string(j));
    }
    std::vector<double> flat;
    for (const auto& r : rows) {
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return stats::rank_matrix(stats::ScoreTable(models, flat, stats::Direction::HigherBetter));
}

void prop_rank_sums(Check& c, std::mt19937_64& rng) {
    for (int t = 0; t < kCases; ++t) {
        const auto n = 2 + rng() % 6, k = 2 + rng() % 12;
        const auto rows = random_rows(rng, n, k);
        const auto rm = ranks_of(rows);
        for (std::size_t b = 0; b < n; ++b) {
            double sum = 0;
            const auto expected = oracle::ranks_by_counting(rows[b], true);
            for (std::size_t j = 0; j < k; ++j) {
                sum += rm.at(b, j);
                c.expect(rm.at(b, j) == expected[j], "rank differs from counting oracle");
            }
            c.expect(sum == static_cast<double>(k * (k + 1)) / 2, "rank row sum");
        }
    }
}

void prop_friedman_invariance(Check& c, std::mt19937_64& rng) {
    for (int t = 0; t < kCases; ++t) {
        const auto n = 2 + rng() % 8, k = 2 + rng() % 6;
        auto rows = random_rows(rng, n, k);
        const auto base = friedman_of(rows);
        for (auto& r : rows) {
            const double a = 0.5 + static_cast<double>(rng() % 7), b = static_cast<double>(rng() % 5) - 2;
            for (auto& v : r) {
                v = a * v * v * v + b;
            }
        }
        const auto moved = friedman_of(rows);
        c.expect(moved.chi2 == base.chi2 && moved.p_value == base.p_value && moved.mean_ranks == base.mean_ranks,
                 "Friedman changed under a blockwise monotone transform");
        c.near(base.chi2, oracle::friedman_chi2(rows, true), 1e-9, "Friedman chi2 vs oracle");
    }
}

void prop_kfold(Check& c, std::mt19937_64& rng) {
    for (int t = 0; t < kCases; ++t) {
        std::vector<std::pair<std::string, int>> totals;
        for (auto classes = 1 + rng() % 6; classes > 0; --classes) {
            totals.emplace_back("L" + std::to_string(totals.size()), 1 + static_cast<int>(rng() % 40));
        }
        const auto manifest = fixtures::manifest_from_totals(totals);
        const int k = 2 + static_cast<int>(rng() % 9);
        const auto plan = splits::stratified_kfold(manifest, k, rng());
        c.expect(plan.fold_of.size() == manifest.size(), "k-fold coverage");
        std::map<std::string, std::vector<int>> per_class;
        for (const auto& e : manifest.entries()) {
            auto it = plan.fold_of.find(e.sample_id);
            if (it == plan.fold_of.end() || it->second < 0 || it->second >= k) {
                c.expect(false, "sample without a valid fold");
                continue;
            }
            per_class[e.label].resize(static_cast<std::size_t>(k));
            ++per_class[e.label][static_cast<std::size_t>(it->second)];
        }
        for (const auto& [label, counts] : per_class) {
            const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
            c.expect(*hi - *lo <= 1, "class " + label + " imbalance > 1");
        }
    }
}

void prop_merge(Check& c, std::mt19937_64& rng) {
    for (int t = 0; t < kCases; ++t) {
        auto schema = config_gen::random_schema(rng, 4);
        schema.leaf = false;
        const auto a = config_gen::instance_of(schema, rng), b = config_gen::instance_of(schema, rng),
                   d = config_gen::instance_of(schema, rng);
        c.expect(config::merge(config::merge(a, b), d) == config::merge(a, config::merge(b, d)),
                 "merge not associative");
        c.expect(config::merge(config::ConfigNode::mapping(), a) == a, "empty mapping not a left identity");
    }
}

void prop_bold(Check& c, std::mt19937_64& rng) {
    const std::vector<report::ColumnSpec> cols = {{"A", "a", report::Better::Higher, 2, "", 1.0},
                                                  {"B", "b", report::Better::Lower, 2, "", 1.0},
                                                  {"C", "c", report::Better::None, 2, "", 1.0}};
    for (int t = 0; t < kCases; ++t) {
        report::TableModel table{{{"G", {}}}};
        const auto rows = 1 + rng() % 6;
        for (std::size_t r = 0; r < rows; ++r) {
            table.groups[0].rows.push_back({"m" + std::to_string(r), "-",
                                            {static_cast<double>(rng() % 4), static_cast<double>(rng() % 4),
                                             static_cast<double>(rng() % 4)}});
        }
        const auto tex = report::render_latex_table(table, cols);
        std::size_t expected_bold = 0;
        for (std::size_t col = 0; col < 2; ++col) {
            double opt = col == 0 ? -1 : 10;
            for (const auto& r : table.groups[0].rows) {
                opt = col == 0 ? std::max(opt, r.cells[col]) : std::min(opt, r.cells[col]);
            }
            for (const auto& r : table.groups[0].rows) {
                expected_bold += r.cells[col] == opt ? 1 : 0;
            }
        }
        std::size_t bold = 0;
        for (auto p = tex.find("\\textbf{"); p != std::string::npos; p = tex.find("\\textbf{", p + 1)) {
            ++bold;
        }
        c.expect(bold == expected_bold, "bold count differs from per-column argopt");
        const auto best = report::best_cells(table, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            c.expect(!best[r][2], "none column bolded");
        }
    }
}

void prop_connectors(Check& c, std::mt19937_64& rng) {
    for (int t = 0; t < kCases; ++t) {
        const auto k = 2 + rng() % 12;
        std::vector<double> ranks(k);
        for (auto& r : ranks) {
            r = 1.0 + static_cast<double>(rng() % 33) / 32.0 * static_cast<double>(k - 1);
        }
        std::sort(ranks.begin(), ranks.end());
        const double cd = std::uniform_real_distribution<double>(0, 4)(rng);
        const auto got = report::connector_groups(ranks, cd);
        const auto want = oracle::maximal_intervals(ranks, cd);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i) {
            same = got[i].first == want[i].first && got[i].last == want[i].second;
        }
        c.expect(same, "connector groups differ from brute-force maximal intervals");
    }
}

void criterion6(Check& c) {
    std::mt19937_64 rng(20240601);
    prop_metric_identities(c, rng);
    prop_rank_sums(c, rng);
    prop_friedman_invariance(c, rng);
    prop_kfold(c, rng);
    prop_merge(c, rng);
    prop_bold(c, rng);
    prop_connectors(c, rng);
}

// ---- 7: determinism

void criterion7(Check& c) {
    const auto dir = fs::temp_directory_path() / "benchkit_accept_determinism";
    fs::remove_all(dir);
    auto p = [&](const std::string& rel) { return (dir / rel).string(); };

    spit(p("preds.jsonl"), ingest::serialize_predictions(fixtures::records_for(fixtures::pointnet_outcomes())));
    std::mt19937_64 rng(7);
    std::string scores = "fold,A,B,C,D,E,F\n";
    for (int f = 0; f < 10; ++f) {
        scores += std::to_string(f);
        for (int m = 0; m < 6; ++m) {
            scores += "," + csv::format_exact(std::uniform_real_distribution<double>(0.5, 0.9)(rng));
        }
        scores += "\n";
    }
    spit(p("scores.csv"), scores);
    std::string manifest = "sample_id,label\n";
    for (const auto& [label, n] : fixtures::tree_species_class_totals()) {
        for (int i = 0; i < n; ++i) {
            manifest += label + "_" + std::to_string(i) + "," + label + "\n";
        }
    }
    spit(p("manifest.csv"), manifest);
    for (const auto& [model, outcomes] :
         {std::pair{"PointNet", fixtures::pointnet_outcomes()}, std::pair{"MSG", fixtures::pointnet2_msg_outcomes()}}) {
        spit(p(std::string("exp/") + model + "/meta.json"),
             json{{"model", model}, {"strategy", "-"}, {"category", "Point-based"}, {"total_params_m", 1.0},
                  {"train_params_m", 1.0}, {"epoch_time_s", 1.0}}
                 .dump());
        for (int fold = 0; fold < 3; ++fold) {
            spit(p(std::string("exp/") + model + "/fold_" + std::to_string(fold) + "/predictions.jsonl"),
                 ingest::serialize_predictions(fixtures::records_for(outcomes)));
            spit(p(std::string("exp/") + model + "/fold_" + std::to_string(fold) + "/epochs.csv"),
                 "epoch,val_accuracy\n1,0.5\n2,0.6\n");
        }
    }
    spit(p("episodes.csv"), "accuracy\n0.41\n0.47\n0.52\n0.39\n");
    spit(p("base.yaml"), "model: {name: pointnet, dim: 64}\ntrain: {epochs: 200}\n");
    spit(p("child.yaml"), "_base_: base.yaml\nmodel: {dim: 128}\n");

    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> commands = {
        {{"metrics", p("preds.jsonl")}, {}},
        {{"compare", p("scores.csv"), "--out-json", p("c.json"), "--out-latex", p("c.tex"), "--out-svg", p("c.svg")},
         {"c.json", "c.tex", "c.svg"}},
        {{"split", p("manifest.csv"), "--k", "5", "--seed", "11", "--out", p("k.json")}, {"k.json"}},
        {{"split", p("manifest.csv"), "--train-frac", "0.8", "--seed", "11"}, {}},
        {{"table", "--exp-dir", p("exp"), "--out-latex", p("t.tex"), "--out-csv", p("t.csv")}, {"t.tex", "t.csv"}},
        {{"fewshot", p("episodes.csv"), "--out-json", p("f.json")}, {"f.json"}},
        {{"config", "resolve", p("child.yaml")}, {}},
    };
    for (const auto& [args, files] : commands) {
        std::string first;
        for (int run = 0; run < 2; ++run) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            c.expect(code == 0, args[0] + " failed: " + err.str());
            std::string bytes = out.str();
            for (const auto& f : files) {
                bytes += "\x1f" + slurp(dir / f);
                fs::remove(dir / f);
            }
            if (run == 0) {
                first = bytes;
            } else {
                c.expect(bytes == first, args[0] + " output differs between runs");
            }
        }
    }
    fs::remove_all(dir);
}

// ---- 8: golden files

void compare_golden(Check& c, const std::string& name, const std::string& actual) {
    const auto path = golden_dir / name;
    if (update_golden) {
        spit(path, actual);
    }
    if (!fs::exists(path)) {
        c.expect(false, "missing golden file " + path.string());
        return;
    }
    c.expect(slurp(path) == actual, name + " differs from the golden file");
}

void criterion8(Check& c) {
    const auto cols = cli::default_columns();
    report::TableModel table{{{"Point-based",
                               {
                                   {"PointNet", "-", {51.08, 46.02, 43.61, 46.02, 47.36, 3.47, 3.47, 0.96}},
                                   {"PointNet2-MSG", "-", {67.63, 65.24, 65.60, 65.24, 68.41, 1.73, 1.73, 8.50}},
                                   {"PointKAN", "-", {48.92, 41.64, 43.27, 41.64, 56.17, 0.16, 0.16, 0.75}},
                               }}}};
    const auto tex = report::render_latex_table(table, cols);
    c.expect(tex.find("& \\textbf{0.16} &") != std::string::npos, "0.16 not bolded in the params column");
    compare_golden(c, "table3_rows.tex", tex);

    const std::vector<std::string> names = {"PointNet", "PointNet2-MSG", "DGCNN", "PointKAN", "PointMLP", "RepSurf"};
    const std::vector<double> ranks = {4.9, 2.3, 3.1, 5.6, 2.0, 3.1};
    const auto svg = report::cd_diagram_svg(names, ranks, stats::critical_difference(6, 10, 0.05));
    compare_golden(c, "cd_diagram_6models.svg", svg);
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--update-golden") {
            update_golden = true;
        } else if (a == "--golden-dir" && i + 1 < argc) {
            golden_dir = argv[++i];
        } else {
            std::cerr << "usage: benchkit_acceptance [--golden-dir DIR] [--update-golden]\n";
            return 64;
        }
    }

    struct Criterion {
        const char* title;
        void (*fn)(Check&);
        double budget_s;
    };
    const Criterion criteria[] = {
        {"PointNet fixture: accuracy 51.08, balanced 46.02", criterion1, 1.0},
        {"PointNet2-MSG fixture: accuracy 67.63, balanced 65.24", criterion2, 1.0},
        {"stratified 0.8 holdout train counts, Oak erratum", criterion3, 1.0},
        {"Friedman clean sweep and all-tied", criterion4, 1.0},
        {"Nemenyi q and critical difference", criterion5, 5.0},
        {"property suites", criterion6, 60.0},
        {"CLI determinism", criterion7, 60.0},
        {"golden LaTeX table and CD diagram", criterion8, 5.0},
    };

    int failed = 0;
    int index = 0;
    for (const auto& crit : criteria) {
        ++index;
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            crit.fn(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > crit.budget_s) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "took %.3f s, budget %.1f s", secs, crit.budget_s);
            check.failures.emplace_back(buf);
        }
        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("%s criterion %d: %s (%.1f ms)\n", ok ? "PASS" : "FAIL", index, crit.title, secs * 1000);
        for (std::size_t i = 0; i < check.failures.size() && i < 10; ++i) {
            std::printf("    %s\n", check.failures[i].c_str());
        }
        if (check.failures.size() > 10) {
            std::printf("    ... %zu more\n", check.failures.size() - 10);
        }
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed;
}
