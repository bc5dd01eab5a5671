#pragma once

#include <string>
#include <utility>
#include <vector>

namespace confham {
namespace svg {

/// Minimal static-plot emitter: orbit projections and scan heatmaps, no
/// plotting dependency. Output is deterministic for identical inputs.

/// Polyline plot of (x, y) points with axes and tick labels.
std::string polyline_plot(const std::vector<std::pair<double, double>>& points,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& title);

/// Heatmap of a row-major grid: cell (i, j) holds values[i * cols + j],
/// rows indexed by y_ticks, columns by x_ticks. NaN cells render hatched grey.
std::string heatmap(const std::vector<double>& values, const std::vector<double>& x_ticks,
                    const std::vector<double>& y_ticks, const std::string& x_label,
                    const std::string& y_label, const std::string& title);

/// Horizontal level diagram (one tick per eigenvalue, clusters share color).
std::string level_diagram(const std::vector<double>& levels, const std::vector<int>& cluster_ids,
                          const std::string& title);

}  // namespace svg
}  // namespace confham
