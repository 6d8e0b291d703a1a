#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "benchkit/error.hpp"
#include "benchkit/report.hpp"

namespace benchkit::report {

std::vector<ConnectorGroup> connector_groups(std::span<const double> sorted_ranks, double cd) {
    std::vector<ConnectorGroup> groups;
    const auto n = sorted_ranks.size();
    std::size_t previous_last = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t last = i;
        while (last + 1 < n && sorted_ranks[last + 1] - sorted_ranks[i] <= cd) {
            ++last;
        }
        // The furthest reach is non-decreasing in i, so a run is nested in the
        // previous one exactly when it ends at the same place.
        if (last > i && (groups.empty() || last > previous_last)) {
            groups.push_back({i, last});
        }
        previous_last = std::max(previous_last, last);
    }
    return groups;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kMargin = 40.0;
constexpr double kRowHeight = 24.0;
constexpr double kLabelWidth = 160.0;
constexpr double kAxisLeft = kMargin + kLabelWidth;
constexpr double kAxisRight = kWidth - kMargin - kLabelWidth;
constexpr double kCdBarY = kMargin + 10.0;
constexpr double kAxisY = kMargin + 40.0;
constexpr double kBarSpacing = 8.0;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") {
        s = "0.00";
    }
    return s;
}

std::string escape_xml(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string line(double x1, double y1, double x2, double y2, double stroke_width) {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"black\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

std::string text(double x, double y, std::string_view anchor, std::string_view content) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + std::string(anchor) + "\">" +
           escape_xml(content) + "</text>\n";
}

}  // namespace

std::string cd_diagram_svg(std::span<const std::string> model_names, std::span<const double> mean_ranks, double cd) {
    const auto k = model_names.size();
    if (k < 2 || mean_ranks.size() != k) {
        throw InvalidArgument("CD diagram needs at least 2 models and one mean rank per model");
    }
    for (double r : mean_ranks) {
        if (!std::isfinite(r)) {
            throw InvalidArgument("CD diagram: non-finite mean rank");
        }
    }
    if (!std::isfinite(cd) || cd < 0.0) {
        throw InvalidArgument("CD diagram: critical difference must be finite and non-negative");
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mean_ranks[a] < mean_ranks[b]; });
    std::vector<double> sorted;
    for (auto i : order) {
        sorted.push_back(mean_ranks[i]);
    }
    const auto groups = connector_groups(sorted, cd);

    const double span = static_cast<double>(k - 1);
    auto x_of = [&](double rank) { return kAxisLeft + (rank - 1.0) / span * (kAxisRight - kAxisLeft); };

    const std::size_t left_count = (k + 1) / 2;
    const std::size_t right_count = k - left_count;
    const double first_label_y = kAxisY + 12.0 + static_cast<double>(groups.size()) * kBarSpacing + kRowHeight;
    const double height =
        first_label_y + static_cast<double>(std::max(left_count, right_count) - 1) * kRowHeight + kMargin;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";

    // CD scale bar
    svg += line(x_of(1.0), kCdBarY, x_of(1.0 + cd), kCdBarY, 2.0);
    svg += line(x_of(1.0), kCdBarY - 4.0, x_of(1.0), kCdBarY + 4.0, 1.0);
    svg += line(x_of(1.0 + cd), kCdBarY - 4.0, x_of(1.0 + cd), kCdBarY + 4.0, 1.0);
    svg += text(0.5 * (x_of(1.0) + x_of(1.0 + cd)), kCdBarY - 8.0, "middle", "CD = " + num(cd));

    // axis
    svg += line(kAxisLeft, kAxisY, kAxisRight, kAxisY, 1.0);
    for (std::size_t t = 1; t <= k; ++t) {
        const double x = x_of(static_cast<double>(t));
        svg += line(x, kAxisY - 6.0, x, kAxisY, 1.0);
        svg += text(x, kAxisY - 10.0, "middle", std::to_string(t));
    }

    // connectors for groups that are not significantly different
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double y = kAxisY + 12.0 + static_cast<double>(g) * kBarSpacing;
        svg += line(x_of(sorted[groups[g].first]) - 4.0, y, x_of(sorted[groups[g].last]) + 4.0, y, 3.0);
    }

    // labels: better half on the left from the top, worse half on the right from the bottom rank up
    for (std::size_t row = 0; row < left_count; ++row) {
        const auto m = order[row];
        const double x = x_of(mean_ranks[m]);
        const double y = first_label_y + static_cast<double>(row) * kRowHeight;
        svg += "<polyline points=\"" + num(x) + "," + num(kAxisY) + " " + num(x) + "," + num(y) + " " +
               num(kAxisLeft - 10.0) + "," + num(y) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.00\"/>\n";
        svg += text(kAxisLeft - 14.0, y + 4.0, "end", model_names[m] + " (" + num(mean_ranks[m]) + ")");
    }
    for (std::size_t row = 0; row < right_count; ++row) {
        const auto m = order[k - 1 - row];
        const double x = x_of(mean_ranks[m]);
        const double y = first_label_y + static_cast<double>(row) * kRowHeight;
        svg += "<polyline points=\"" + num(x) + "," + num(kAxisY) + " " + num(x) + "," + num(y) + " " +
               num(kAxisRight + 10.0) + "," + num(y) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.00\"/>\n";
        svg += text(kAxisRight + 14.0, y + 4.0, "start", "(" + num(mean_ranks[m]) + ") " + model_names[m]);
    }

    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace benchkit::report
