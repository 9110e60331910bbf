#include "tsad/viz/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <vector>

#include "tsad/core/format.hpp"
#include "tsad/detect/detector.hpp"
#include "tsad/error.hpp"

namespace tsad::viz {

namespace {

constexpr double kWidth = 1000.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kPlotWidth = kWidth - kLeft - kRight;

struct Panel {
    double top;
    double height;
    double bottom() const { return top + height; }
};

constexpr Panel kSeriesPanel{60.0, 190.0};
constexpr Panel kScorePanel{300.0, 170.0};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

void check_inputs(const core::Dataset& dataset, std::span<const double> scores) {
    if (scores.size() != dataset.x_test.size()) {
        throw ValidationError("plot: " + std::to_string(scores.size()) + " scores for a test series of length " +
                              std::to_string(dataset.x_test.size()));
    }
}

double x_of(std::size_t i, std::size_t n) {
    if (n <= 1) return kLeft + kPlotWidth / 2.0;
    return kLeft + kPlotWidth * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Indices to draw: all of them for short series; otherwise the first
// occurring extreme then the other extreme of each pixel-column bucket.
std::vector<std::size_t> display_indices(std::span<const double> y) {
    const std::size_t n = y.size();
    std::vector<std::size_t> idx;
    if (n <= kDownsampleThreshold) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        return idx;
    }
    const auto columns = static_cast<std::size_t>(kPlotWidth);
    for (std::size_t c = 0; c < columns; ++c) {
        const std::size_t first = c * n / columns;
        const std::size_t last = (c + 1) * n / columns;
        if (first >= last) continue;
        const auto lo = static_cast<std::size_t>(std::min_element(y.begin() + first, y.begin() + last) - y.begin());
        const auto hi = static_cast<std::size_t>(std::max_element(y.begin() + first, y.begin() + last) - y.begin());
        idx.push_back(std::min(lo, hi));
        if (lo != hi) idx.push_back(std::max(lo, hi));
    }
    return idx;
}

std::string polyline(std::span<const double> y, double low, double high, const Panel& panel,
                     const char* css_class, const char* color) {
    const double range = high - low;
    std::string points;
    for (std::size_t i : display_indices(y)) {
        const double frac = range > 0.0 ? (y[i] - low) / range : 0.5;
        if (!points.empty()) points += ' ';
        points += num(x_of(i, y.size())) + "," + num(panel.bottom() - frac * panel.height);
    }
    return "  <polyline class=\"" + std::string(css_class) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1\" points=\"" + points + "\"/>\n";
}

std::string axes(const Panel& panel, const std::string& title, double low, double high, std::size_t n) {
    std::string out;
    out += "  <text class=\"panel-title\" x=\"" + num(kLeft) + "\" y=\"" + num(panel.top - 8.0) +
           "\" font-size=\"13\">" + xml_escape(title) + "</text>\n";
    out += "  <line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(panel.top) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(panel.bottom()) + "\" stroke=\"#000\"/>\n";
    out += "  <line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(panel.bottom()) + "\" x2=\"" +
           num(kLeft + kPlotWidth) + "\" y2=\"" + num(panel.bottom()) + "\" stroke=\"#000\"/>\n";
    out += "  <text class=\"tick\" x=\"" + num(kLeft - 6.0) + "\" y=\"" + num(panel.bottom()) +
           "\" font-size=\"10\" text-anchor=\"end\">" + tick(low) + "</text>\n";
    out += "  <text class=\"tick\" x=\"" + num(kLeft - 6.0) + "\" y=\"" + num(panel.top + 10.0) +
           "\" font-size=\"10\" text-anchor=\"end\">" + tick(high) + "</text>\n";
    constexpr int kTicks = 5;
    for (int t = 0; t < kTicks; ++t) {
        const std::size_t i = n <= 1 ? 0 : static_cast<std::size_t>(t) * (n - 1) / (kTicks - 1);
        out += "  <text class=\"tick\" x=\"" + num(x_of(i, n)) + "\" y=\"" + num(panel.bottom() + 14.0) +
               "\" font-size=\"10\" text-anchor=\"middle\">" + std::to_string(i) + "</text>\n";
    }
    return out;
}

}  // namespace

std::string render_anomaly_scores_svg(const core::Dataset& dataset, std::span<const double> scores) {
    check_inputs(dataset, scores);
    const auto values = dataset.x_test.values();
    const std::size_t n = values.size();
    const auto [vmin, vmax] = std::minmax_element(values.begin(), values.end());
    const auto normalized = detect::normalize_scores(scores);

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) +
           "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    svg += "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" fill=\"#ffffff\"/>\n";
    svg += "  <text class=\"title\" x=\"" + num(kWidth / 2.0) +
           "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">" + xml_escape(dataset.name) + "</text>\n";

    // Shaded ground-truth ranges, drawn under the series.
    const double half_step = n > 1 ? kPlotWidth / static_cast<double>(n - 1) / 2.0 : kPlotWidth / 2.0;
    for (std::size_t i = 0; i < n;) {
        if (dataset.y_test[i] == 0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && dataset.y_test[j] == 1) ++j;
        const double x0 = std::max(kLeft, x_of(i, n) - half_step);
        const double x1 = std::min(kLeft + kPlotWidth, x_of(j - 1, n) + half_step);
        svg += "  <rect class=\"anomaly\" x=\"" + num(x0) + "\" y=\"" + num(kSeriesPanel.top) +
               "\" width=\"" + num(x1 - x0) + "\" height=\"" + num(kSeriesPanel.height) +
               "\" fill=\"#d62728\" fill-opacity=\"0.25\"/>\n";
        i = j;
    }

    svg += axes(kSeriesPanel, "Time series", *vmin, *vmax, n);
    svg += polyline(values, *vmin, *vmax, kSeriesPanel, "series", "#1f77b4");
    svg += axes(kScorePanel, "Anomaly scores", 0.0, 1.0, n);
    svg += polyline(normalized, 0.0, 1.0, kScorePanel, "scores", "#ff7f0e");
    svg += "  <text class=\"axis-label\" x=\"" + num(kLeft + kPlotWidth / 2.0) + "\" y=\"" +
           num(kHeight - 12.0) + "\" font-size=\"12\" text-anchor=\"middle\">Time</text>\n";
    svg += "</svg>\n";
    return svg;
}

void plot_anomaly_scores(const core::Dataset& dataset, std::span<const double> scores,
                         const std::filesystem::path& out_path) {
    const auto svg = render_anomaly_scores_svg(dataset, scores);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path.string());
    out << svg;
    if (!out) throw IoError("failed writing " + out_path.string());
}

std::string plot_data_csv(const core::Dataset& dataset, std::span<const double> scores) {
    check_inputs(dataset, scores);
    std::string out = "index,value,label,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out += std::to_string(i) + "," + core::format_real(dataset.x_test[i]) + "," +
               std::to_string(dataset.y_test[i]) + "," + core::format_real(scores[i]) + "\n";
    }
    return out;
}

void export_plot_data(const core::Dataset& dataset, std::span<const double> scores,
                      const std::filesystem::path& out_path) {
    const auto csv = plot_data_csv(dataset, scores);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path.string());
    out << csv;
    if (!out) throw IoError("failed writing " + out_path.string());
}

}  // namespace tsad::viz
