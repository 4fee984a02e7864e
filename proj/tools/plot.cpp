#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace delib::plot {

namespace {

const char* kPalette[] = {"#4878cf", "#ee854a", "#6acc65", "#d65f5f",
                          "#956cb4", "#8c613c", "#dc7ec0", "#797979"};
constexpr int kPaletteSize = 8;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string render_svg(const BarChart& chart) {
    if (chart.series.empty() || chart.group_labels.empty())
        throw std::invalid_argument("svg chart: nothing to draw");
    const size_t n_groups = chart.group_labels.size();
    for (const BarSeries& s : chart.series)
        if (s.means.size() != n_groups || s.ses.size() != n_groups)
            throw std::invalid_argument("svg chart: series size mismatch");

    const double width = 900, height = 420;
    const double left = 70, right = 20, top = 40, bottom = 92;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double ymax = 0.0;
    for (const BarSeries& s : chart.series)
        for (size_t g = 0; g < n_groups; ++g) ymax = std::max(ymax, s.means[g] + s.ses[g]);
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.08;

    const auto ypos = [&](double v) { return top + plot_h * (1.0 - v / ymax); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(width / 2) + "\" y=\"22\" font-family=\"sans-serif\" font-size=\"16\""
           " text-anchor=\"middle\">" + escape(chart.title) + "</text>\n";

    // Horizontal gridlines and y tick labels.
    for (int t = 0; t <= 5; ++t) {
        const double v = ymax * t / 5.0;
        const double y = ypos(v);
        svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(width - right) +
               "\" y2=\"" + num(y) + "\" stroke=\"#dddddd\"/>\n";
        char lbl[32];
        std::snprintf(lbl, sizeof(lbl), "%.3g", v);
        svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + lbl +
               "</text>\n";
    }
    svg += "<text x=\"16\" y=\"" + num(top + plot_h / 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\""
           "rotate(-90 16 " + num(top + plot_h / 2) + ")\">" + escape(chart.y_label) + "</text>\n";

    const size_t n_series = chart.series.size();
    const double group_w = plot_w / static_cast<double>(n_groups);
    const double slot_w = group_w * 0.82 / static_cast<double>(n_series);
    for (size_t g = 0; g < n_groups; ++g) {
        const double gx = left + group_w * static_cast<double>(g) + group_w * 0.09;
        for (size_t s = 0; s < n_series; ++s) {
            const double mean = chart.series[s].means[g];
            const double se = chart.series[s].ses[g];
            const double x = gx + slot_w * static_cast<double>(s);
            const double y = ypos(mean);
            const char* color = kPalette[s % kPaletteSize];
            svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
                   num(slot_w * 0.92) + "\" height=\"" + num(ypos(0.0) - y) + "\" fill=\"" +
                   color + "\"/>\n";
            if (se > 0.0) {
                const double cx = x + slot_w * 0.46;
                const double y1 = ypos(std::min(mean + se, ymax));
                const double y2 = ypos(std::max(mean - se, 0.0));
                svg += "<line x1=\"" + num(cx) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(cx) +
                       "\" y2=\"" + num(y2) + "\" stroke=\"#333333\"/>\n";
                svg += "<line x1=\"" + num(cx - 3) + "\" y1=\"" + num(y1) + "\" x2=\"" +
                       num(cx + 3) + "\" y2=\"" + num(y1) + "\" stroke=\"#333333\"/>\n";
                svg += "<line x1=\"" + num(cx - 3) + "\" y1=\"" + num(y2) + "\" x2=\"" +
                       num(cx + 3) + "\" y2=\"" + num(y2) + "\" stroke=\"#333333\"/>\n";
            }
        }
        svg += "<text x=\"" + num(left + group_w * (static_cast<double>(g) + 0.5)) + "\" y=\"" +
               num(top + plot_h + 18) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
               escape(chart.group_labels[g]) + "</text>\n";
    }

    // Baseline and legend.
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(ypos(0.0)) + "\" x2=\"" +
           num(width - right) + "\" y2=\"" + num(ypos(0.0)) + "\" stroke=\"#333333\"/>\n";
    const double legend_w = plot_w / static_cast<double>(n_series);
    for (size_t s = 0; s < n_series; ++s) {
        const double x = left + legend_w * static_cast<double>(s);
        const double y = height - 34;
        svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"12\" height=\"12\" fill=\"" +
               kPalette[s % kPaletteSize] + "\"/>\n";
        svg += "<text x=\"" + num(x + 16) + "\" y=\"" + num(y + 10) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(chart.series[s].label) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace delib::plot
