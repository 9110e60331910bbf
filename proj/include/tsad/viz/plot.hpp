#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include "tsad/core/time_series.hpp"

namespace tsad::viz {

// Series longer than this are min/max-bucketed per pixel column.
inline constexpr std::size_t kDownsampleThreshold = 20000;

/// Standalone SVG with two stacked panels over a shared time axis: the test
/// series with labeled anomaly ranges shaded, and the scores min-max scaled
/// to [0, 1]. Exactly two <polyline> elements; one <rect class="anomaly">
/// per contiguous labeled range.
std::string render_anomaly_scores_svg(const core::Dataset& dataset, std::span<const double> scores);

void plot_anomaly_scores(const core::Dataset& dataset, std::span<const double> scores,
                         const std::filesystem::path& out_path);

/// `index,value,label,score` for every test observation, scores unscaled.
std::string plot_data_csv(const core::Dataset& dataset, std::span<const double> scores);

void export_plot_data(const core::Dataset& dataset, std::span<const double> scores,
                      const std::filesystem::path& out_path);

}  // namespace tsad::viz
