#pragma once

// Reference implementations written straight from the definitions. They share
// no code with the library and are only used to cross-check it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Count of records per (true, pred) pair via a std::map tally.
inline std::map<std::pair<std::string, std::string>, std::uint64_t> tally(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> out;
    for (const auto& p : pairs) {
        ++out[p];
    }
    return out;
}

struct Metrics {
    double accuracy = 0, balanced = 0, macro_f1 = 0, weighted_f1 = 0, macro_precision = 0, kappa = 0;
    std::vector<double> precision, recall, f1;
};

/// Definition-level metrics by looping over every (true, pred) sample.
inline Metrics metrics_from_samples(const std::vector<std::pair<int, int>>& samples, int classes) {
    Metrics m;
    const double n = static_cast<double>(samples.size());
    int correct = 0;
    std::vector<double> tp(classes), actual(classes), predicted(classes);
    for (auto [t, p] : samples) {
        actual[t] += 1;
        predicted[p] += 1;
        if (t == p) {
            tp[t] += 1;
            ++correct;
        }
    }
    m.accuracy = correct / n;
    int supported = 0;
    double chance = 0;
    for (int c = 0; c < classes; ++c) {
        const double p = predicted[c] > 0 ? tp[c] / predicted[c] : 0.0;
        const double r = actual[c] > 0 ? tp[c] / actual[c] : 0.0;
        const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        m.precision.push_back(p);
        m.recall.push_back(r);
        m.f1.push_back(f);
        if (actual[c] > 0) {
            ++supported;
            m.balanced += r;
            m.macro_f1 += f;
            m.macro_precision += p;
        }
        m.weighted_f1 += actual[c] / n * f;
        chance += (actual[c] / n) * (predicted[c] / n);
    }
    m.balanced /= supported;
    m.macro_f1 /= supported;
    m.macro_precision /= supported;
    m.kappa = chance == 1.0 ? 0.0 : (m.accuracy - chance) / (1 - chance);
    return m;
}

/// rank = 1 + (#strictly better) + (#ties - 1) / 2, counted directly.
inline std::vector<double> ranks_by_counting(const std::vector<double>& block, bool higher_better) {
    std::vector<double> ranks;
    for (double v : block) {
        int better = 0, equal = 0;
        for (double w : block) {
            if (w == v) {
                ++equal;
            } else if (higher_better ? w > v : w < v) {
                ++better;
            }
        }
        ranks.push_back(1.0 + better + 0.5 * (equal - 1));
    }
    return ranks;
}

/// Friedman chi^2 from rank sums: 12/(N k (k+1)) * sum R_j^2 - 3 N (k+1),
/// divided by the tie correction counted on raw scores.
inline double friedman_chi2(const std::vector<std::vector<double>>& scores, bool higher_better) {
    const double N = static_cast<double>(scores.size());
    const double k = static_cast<double>(scores.front().size());
    std::vector<double> rank_sum(scores.front().size(), 0.0);
    double ties = 0;
    for (const auto& block : scores) {
        auto r = ranks_by_counting(block, higher_better);
        for (std::size_t j = 0; j < r.size(); ++j) {
            rank_sum[j] += r[j];
        }
        std::map<double, int> groups;
        for (double v : block) {
            ++groups[v];
        }
        for (auto [_, t] : groups) {
            ties += static_cast<double>(t) * t * t - t;
        }
    }
    double ss = 0;
    for (double R : rank_sum) {
        ss += R * R;
    }
    const double chi2 = 12.0 / (N * k * (k + 1)) * ss - 3.0 * N * (k + 1);
    const double c = 1.0 - ties / (N * k * (k * k - 1));
    return c <= 0 ? 0.0 : chi2 / c;
}

/// Adaptive Simpson integration.
inline double simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth = 30) {
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double tol, int d) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            const double flm = f(lm), frm = f(rm);
            const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
            const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
            if (d <= 0 || std::abs(left + right - whole) <= 15 * tol) {
                return left + right + (left + right - whole) / 15;
            }
            return rec(lo, mid, flo, flm, fmid, left, tol / 2, d - 1) +
                   rec(mid, hi, fmid, frm, fhi, right, tol / 2, d - 1);
        };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, depth);
}

/// P(F > x) by integrating the F density over [x, inf) with u = x / (1 - s).
/// Needs d2 >= 2 for a bounded integrand.
inline double f_sf_quadrature(double x, int d1, int d2) {
    const double a = 0.5 * d1, b = 0.5 * d2;
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto pdf = [&](double u) {
        if (u <= 0) {
            return 0.0;
        }
        const double log_pdf = a * std::log(d1 * u) + b * std::log(static_cast<double>(d2)) -
                               (a + b) * std::log(d1 * u + d2) - std::log(u) - log_beta;
        return std::exp(log_pdf);
    };
    auto integrand = [&](double s) {
        if (s >= 1.0) {
            return 0.0;
        }
        const double u = x / (1.0 - s);
        return pdf(u) * x / ((1.0 - s) * (1.0 - s));
    };
    return simpson(integrand, 0.0, 1.0, 1e-12);
}

inline double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Range-of-k-normals CDF by composite Simpson on [-10, 10 + w].
inline double range_cdf(double w, int k) {
    auto f = [&](double u) {
        const double dens = std::exp(-0.5 * u * u) / std::sqrt(2 * std::numbers::pi);
        return dens * std::pow(phi_cdf(u) - phi_cdf(u - w), k - 1);
    };
    const int n = 8000;
    const double a = -10.0, b = 10.0 + w, h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    }
    return k * sum * h / 3.0;
}

/// q_alpha = w / sqrt(2) with w from bracketed regula falsi (Illinois) on range_cdf.
inline double nemenyi_q(int k, double alpha) {
    double lo = 0.0, hi = 12.0;
    double flo = -(1 - alpha), fhi = range_cdf(hi, k) - (1 - alpha);
    int side = 0;
    double w = lo;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        w = (lo * fhi - hi * flo) / (fhi - flo);
        const double fw = range_cdf(w, k) - (1 - alpha);
        if (fw == 0) {
            break;
        }
        if ((fw < 0) == (flo < 0)) {
            lo = w;
            flo = fw;
            if (side == -1) {
                fhi /= 2;
            }
            side = -1;
        } else {
            hi = w;
            fhi = fw;
            if (side == 1) {
                flo /= 2;
            }
            side = 1;
        }
        if (std::abs(fw) < 1e-15) {
            break;
        }
    }
    return w / std::numbers::sqrt2;
}

/// All intervals [i, j] (i < j) of sorted ranks with spread <= cd that are not
/// strictly contained in another such interval.
inline std::vector<std::pair<std::size_t, std::size_t>> maximal_intervals(const std::vector<double>& sorted, double cd) {
    std::vector<std::pair<std::size_t, std::size_t>> ok;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            if (sorted[j] - sorted[i] <= cd) {
                ok.emplace_back(i, j);
            }
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> maximal;
    for (auto [i, j] : ok) {
        bool contained = false;
        for (auto [a, b] : ok) {
            if (a <= i && j <= b && (a != i || b != j)) {
                contained = true;
                break;
            }
        }
        if (!contained) {
            maximal.emplace_back(i, j);
        }
    }
    return maximal;
}

}  // namespace oracle
