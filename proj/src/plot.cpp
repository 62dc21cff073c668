#include "voltgrid/plot.hpp"

#include "voltgrid/csv.hpp"
#include "voltgrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace voltgrid {

namespace {

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354",
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_line_svg(const std::string& path, const PlotSpec& spec) {
    const int width = 1180, height = 420;
    const int ml = 70, mr = 180, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (double v : spec.x) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    for (const auto& s : spec.series)
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    for (double h : spec.hlines) {
        ymin = std::min(ymin, h);
        ymax = std::max(ymax, h);
    }
    if (!std::isfinite(xmin) || xmin == xmax) {
        xmin = 0.0;
        xmax = std::max(1.0, xmax);
    }
    if (!std::isfinite(ymin)) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (ymin == ymax) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << ml << "\" y=\"22\" font-size=\"15\">" << escape(spec.title) << "</text>\n";

    // axes with 6 ticks each
    svg << "<g stroke=\"#333\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph << "\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph << "\"/>\n";
    svg << "</g>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 5.0;
        const double yv = ymin + (ymax - ymin) * t / 5.0;
        svg << "<line x1=\"" << fmt(px(xv)) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(px(xv))
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
            << fmt(xv) << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(py(yv)) << "\" x2=\"" << ml << "\" y2=\""
            << fmt(py(yv)) << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
            << fmt(yv) << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
        << escape(spec.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

    for (double h : spec.hlines) {
        svg << "<line x1=\"" << ml << "\" y1=\"" << fmt(py(h)) << "\" x2=\"" << ml + pw << "\" y2=\""
            << fmt(py(h)) << "\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n";
    }

    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        const auto& y = spec.series[s].y;
        for (std::size_t i = 0; i < y.size() && i < spec.x.size(); ++i) {
            if (!std::isfinite(y[i])) continue;
            svg << fmt(px(spec.x[i])) << ',' << fmt(py(y[i])) << ' ';
        }
        svg << "\"/>\n";
        if (spec.legend) {
            const double ly = mt + 14.0 * static_cast<double>(s);
            svg << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << fmt(ly) << "\" x2=\"" << ml + pw + 34
                << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << ml + pw + 40 << "\" y=\"" << fmt(ly + 4) << "\">"
                << escape(spec.series[s].label) << "</text>\n";
        }
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot file: " + path);
    out << svg.str();
}

std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir) {
    CsvTable table = read_csv(csv_path);
    std::filesystem::create_directories(out_dir);

    const std::string mode = meta_value(table.meta, "mode");
    std::vector<double> steps = table.numeric_column("step");

    PlotSpec perf;
    perf.title = "performance" + (mode.empty() ? "" : " (" + mode + ")");
    perf.y_label = "utility";
    perf.x = steps;
    perf.series.push_back({"actual", table.numeric_column("actual_performance")});
    if (table.column("tracked_rules") >= 0)
        perf.series.push_back({"tracked rules", table.numeric_column("tracked_rules")});
    if (table.column("tracked_adaptive") >= 0)
        perf.series.push_back({"tracked adaptive", table.numeric_column("tracked_adaptive")});
    const std::string perf_path = (std::filesystem::path(out_dir) / "performance.svg").string();
    write_line_svg(perf_path, perf);

    PlotSpec volts;
    volts.title = "bus voltage magnitudes" + (mode.empty() ? "" : " (" + mode + ")");
    volts.y_label = "pu";
    volts.x = steps;
    for (const std::string& name : table.header)
        if (name.rfind("v_bus", 0) == 0) volts.series.push_back({name, table.numeric_column(name)});
    if (volts.series.empty()) throw ParseError("CSV has no v_bus* columns", 1);
    const std::string band = meta_value(table.meta, "band");
    double lo = 0.90, hi = 1.10;
    if (!band.empty()) {
        if (std::sscanf(band.c_str(), "%lf:%lf", &lo, &hi) != 2)
            throw ParseError("malformed band in CSV meta: " + band, 1);
    }
    volts.hlines = {lo, hi};
    const std::string volt_path = (std::filesystem::path(out_dir) / "voltages.svg").string();
    write_line_svg(volt_path, volts);

    return {perf_path, volt_path};
}

} // namespace voltgrid
