#include "ecolotrade/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace ecolotrade {

namespace {

constexpr const char* kPresentColor = "#d62728"; // red
constexpr const char* kAbsentColor = "#1f77b4";  // blue
constexpr const char* kIsoclineColor = "#2ca02c"; // green

void appendf(std::string& out, const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
}

} // namespace

std::string heatmap_svg(const BinaryMatrix& q, const Ordering& ordering,
                        const HeatmapOptions& options) {
    const std::size_t R = q.rows(), C = q.cols();
    if (R == 0 || C == 0) throw std::invalid_argument("heatmap of empty matrix");
    if (ordering.row_perm.size() != R || ordering.col_perm.size() != C)
        throw std::invalid_argument("ordering does not match matrix shape");

    int cell = options.cell_px;
    if (cell <= 0)
        cell = std::clamp(800 / static_cast<int>(std::max(R, C)), 2, 24);
    const int margin = 4;
    const int title_band = options.title.empty() ? 0 : 18;
    const int width = margin * 2 + cell * static_cast<int>(C);
    const int height = margin * 2 + title_band + cell * static_cast<int>(R);
    const int top = margin + title_band;

    std::string svg;
    svg.reserve(R * C * 64 + 1024);
    appendf(svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
            "width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
            width, height, width, height);
    if (!options.title.empty()) {
        appendf(svg, "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\">",
                margin, margin + 12);
        svg += options.title;
        svg += "</text>\n";
    }

    for (std::size_t k = 0; k < R; ++k) {
        for (std::size_t l = 0; l < C; ++l) {
            const bool present = q.at(ordering.row_perm[k], ordering.col_perm[l]) != 0;
            appendf(svg, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\"/>\n",
                    margin + static_cast<int>(l) * cell, top + static_cast<int>(k) * cell, cell,
                    cell, present ? kPresentColor : kAbsentColor);
        }
    }

    if (options.isocline_p > 0.0) {
        // y = 1 - x^p in matrix coordinates, sampled densely.
        const int samples = 256;
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += kIsoclineColor;
        svg += "\" stroke-width=\"2\" points=\"";
        for (int s = 0; s <= samples; ++s) {
            const double x = static_cast<double>(s) / samples;
            const double y = 1.0 - std::pow(x, options.isocline_p);
            appendf(svg, "%.2f,%.2f ", margin + x * cell * static_cast<double>(C),
                    top + y * cell * static_cast<double>(R));
        }
        svg += "\"/>\n";
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace ecolotrade
