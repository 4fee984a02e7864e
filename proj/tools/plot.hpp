#pragma once

#include <string>
#include <vector>

namespace delib::plot {

struct BarSeries {
    std::string label;  // legend entry (one color per series)
    // One value per group; means[g] and ses[g] must have the same length as
    // the chart's group_labels.
    std::vector<double> means;
    std::vector<double> ses;
};

struct BarChart {
    std::string title;
    std::string y_label;
    std::vector<std::string> group_labels;
    std::vector<BarSeries> series;
};

// Self-contained grouped bar chart with error whiskers. Output bytes are a
// pure function of the input.
std::string render_svg(const BarChart& chart);

}  // namespace delib::plot
