#include "benchkit/special_functions.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <utility>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "benchkit/error.hpp"

namespace benchkit::special {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double chi2_sf(double x, int df) {
    if (df <= 0) {
        throw InvalidArgument("chi2_sf: degrees of freedom must be positive, got " + std::to_string(df));
    }
    if (!(x >= 0.0)) {
        throw InvalidArgument("chi2_sf: x must be non-negative");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double f_sf(double x, int d1, int d2) {
    if (d1 <= 0 || d2 <= 0) {
        throw InvalidArgument("f_sf: degrees of freedom must be positive");
    }
    if (!(x >= 0.0)) {
        throw InvalidArgument("f_sf: x must be non-negative");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    // P(F > x) = I_{d2/(d2 + d1 x)}(d2/2, d1/2)
    const double a = 0.5 * d1;
    const double b = 0.5 * d2;
    const double z = d2 / (d2 + d1 * x);
    return boost::math::ibeta(b, a, z);
}

namespace {

constexpr int kNodes = 20;

struct GaussLegendre {
    std::array<double, kNodes> nodes{};
    std::array<double, kNodes> weights{};
};

// Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
GaussLegendre make_rule() {
    GaussLegendre rule;
    const int n = kNodes;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussLegendre& rule() {
    static const GaussLegendre r = make_rule();
    return r;
}

constexpr double kLower = -8.0;
constexpr double kPanelWidth = 0.25;

}  // namespace

double normal_range_cdf(double w, int k) {
    if (k < 2) {
        throw InvalidArgument("normal_range_cdf: k must be at least 2");
    }
    if (!(w > 0.0)) {
        return 0.0;
    }
    const auto& gl = rule();
    const double upper = 8.0 + w;
    const int panels = static_cast<int>(std::ceil((upper - kLower) / kPanelWidth));
    const double h = (upper - kLower) / panels;
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = kLower + (p + 0.5) * h;
        double panel = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double u = mid + 0.5 * h * gl.nodes[i];
            const double density = inv_sqrt_2pi * std::exp(-0.5 * u * u);
            const double inside = 0.5 * (std::erfc(-u / std::numbers::sqrt2) - std::erfc(-(u - w) / std::numbers::sqrt2));
            panel += gl.weights[i] * density * std::pow(inside, k - 1);
        }
        sum += 0.5 * h * panel;
    }
    return std::min(1.0, k * sum);
}

namespace {

double solve_range_quantile(int k, double alpha) {
    const double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = 1.0;
    while (normal_range_cdf(hi, k) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) {
            throw InvalidArgument("studentized_range_quantile: alpha too small to bracket");
        }
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (normal_range_cdf(mid, k) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi) / std::numbers::sqrt2;
}

}  // namespace

double studentized_range_quantile(int k, double alpha) {
    if (k < 2) {
        throw InvalidArgument("studentized_range_quantile: k must be at least 2, got " + std::to_string(k));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("studentized_range_quantile: alpha must lie in (0, 1)");
    }
    static std::shared_mutex mutex;
    static std::map<std::pair<int, double>, double> cache;
    const auto key = std::make_pair(k, alpha);
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    const double q = solve_range_quantile(k, alpha);
    std::unique_lock lock(mutex);
    cache.emplace(key, q);
    return q;
}

}  // namespace benchkit::special
