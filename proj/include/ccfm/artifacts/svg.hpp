#pragma once

#include "ccfm/artifacts/table.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ccfm::artifacts {

enum class ChartKind { StabilityRegion, RateCurve, Bifurcation, Timeseries };

/// How to turn a table into line series: one series per y column, split
/// further by the distinct values of `group` when set.
struct ChartSpec {
    ChartKind kind = ChartKind::Timeseries;
    std::string title;
    std::string x;
    std::vector<std::string> y;
    std::optional<std::string> group;
    std::string x_label;
    std::string y_label;
    /// Values outside [y_min, y_max] are dropped from the drawing only.
    std::optional<double> y_min, y_max;
    /// Dashed vertical marker at the maximum of each series.
    bool mark_peak = false;
    std::size_t max_points = 2000;
};

/// Checks that every referenced column exists. Throws std::invalid_argument.
void check_columns(const Table& table, const ChartSpec& spec);

/// Self-contained SVG line chart (inline axes and polylines, no timestamps).
std::string render_chart(const Table& table, const ChartSpec& spec);

} // namespace ccfm::artifacts
