#pragma once

#include <string>

#include "ecolotrade/nestedness.hpp"

namespace ecolotrade {

struct HeatmapOptions {
    double isocline_p = 0.0;   // > 0 draws the perfect-nestedness curve
    std::string title;
    int cell_px = 0;           // 0 = auto (target ~800px on the long side)
};

/// Render the matrix under the given arrangement as an SVG 1.1 document:
/// red cells for ones, blue for zeros, optional green isocline overlay.
std::string heatmap_svg(const BinaryMatrix& q, const Ordering& ordering,
                        const HeatmapOptions& options);

} // namespace ecolotrade
