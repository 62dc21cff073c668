#pragma once

#include <string>
#include <vector>

namespace voltgrid {

struct PlotSeries {
    std::string label;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "step";
    std::string y_label;
    std::vector<double> x;
    std::vector<PlotSeries> series;
    std::vector<double> hlines;      // dashed horizontal guides
    bool legend = true;
};

// Static SVG line chart; every sample becomes one polyline vertex.
void write_line_svg(const std::string& path, const PlotSpec& spec);

// Renders the two run panels from a run CSV into `out_dir`:
// performance.svg (utility plus tracked estimates when present) and
// voltages.svg (per-bus magnitudes with the grid-code band).
// Returns the written file paths.
std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir);

} // namespace voltgrid
