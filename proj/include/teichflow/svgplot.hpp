#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "teichflow/trace.hpp"

namespace teichflow {

namespace detail {
inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}
} // namespace detail

/**
 * @brief Renders log-log distance-to-limit curves, one path per slope, from
 *        a flow trace. The limit is the final normalized vector; distances
 *        are clipped below at 1e-16. Output bytes are a pure function of the
 *        trace.
 */
inline std::string emit_plot_svg(const FlowTrace& trace) {
    if (trace.samples.size() < 2)
        throw ConfigError("emit_plot_svg: need at least two samples");
    const double width = 800.0, height = 600.0, margin = 60.0;
    const std::vector<double>& limit = trace.samples.back().normalized;

    // Distances per slope for every sample except the final one.
    std::size_t n = trace.samples.size() - 1;
    std::vector<std::vector<double>> dist(trace.family.size());
    double lt_min = 0.0, lt_max = 0.0, ld_min = 0.0, ld_max = -15.0;
    for (std::size_t k = 0; k < n; ++k) {
        double lt = std::log10(std::max(trace.samples[k].t, 1e-300));
        if (k == 0) lt_min = lt_max = lt;
        lt_min = std::min(lt_min, lt);
        lt_max = std::max(lt_max, lt);
    }
    if (lt_max == lt_min) lt_max = lt_min + 1.0;
    for (std::size_t i = 0; i < trace.family.size(); ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            double d = std::fabs(trace.samples[k].normalized[i] - limit[i]);
            double ld = std::log10(std::max(d, 1e-16));
            dist[i].push_back(ld);
            ld_min = std::min(ld_min, ld);
            ld_max = std::max(ld_max, ld);
        }
    }
    if (ld_max == ld_min) ld_max = ld_min + 1.0;

    auto px = [&](double lt) {
        return margin + (lt - lt_min) / (lt_max - lt_min) * (width - 2.0 * margin);
    };
    auto py = [&](double ld) {
        return height - margin - (ld - ld_min) / (ld_max - ld_min) * (height - 2.0 * margin);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg += "<line x1=\"60\" y1=\"540\" x2=\"740\" y2=\"540\" stroke=\"black\"/>\n";
    svg += "<line x1=\"60\" y1=\"60\" x2=\"60\" y2=\"540\" stroke=\"black\"/>\n";
    svg += "<text x=\"400\" y=\"580\" text-anchor=\"middle\" font-size=\"14\">log10 t</text>\n";
    svg += "<text x=\"20\" y=\"300\" text-anchor=\"middle\" font-size=\"14\" "
           "transform=\"rotate(-90 20 300)\">log10 distance to limit</text>\n";

    for (std::size_t i = 0; i < trace.family.size(); ++i) {
        std::string d = "M";
        for (std::size_t k = 0; k < n; ++k) {
            double lt = std::log10(std::max(trace.samples[k].t, 1e-300));
            if (k > 0) d += " L";
            d += detail::svg_num(px(lt)) + "," + detail::svg_num(py(dist[i][k]));
        }
        svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" +
               palette[i % 8] + "\" stroke-width=\"1.2\"><title>" +
               to_string(trace.family[i]) + "</title></path>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace teichflow
