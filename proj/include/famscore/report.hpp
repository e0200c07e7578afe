/*
 * Copyright 2026 The famscore Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "famscore/core.hpp"
#include "famscore/io.hpp"

namespace famscore::report {

// Every plot uses a fixed 800 x 600 view box.
inline constexpr int kWidth = 800;
inline constexpr int kHeight = 600;

/// Categorical colours, indexed by stratum - 1 (mod 10).
inline constexpr std::array<std::string_view, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

/// Singletons black, families of 2 red, 3 green, 4 blue, larger purple.
std::string_view size_class_color(std::size_t family_size) noexcept;

struct Point {
    double x = 0.0;
    double y = 0.0;
    std::string color = "#000000";
};

struct LegendEntry {
    std::string label;
    std::string color;
};

struct ScatterData {
    std::vector<Point> points;
    std::vector<LegendEntry> legend;
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Axes plus one circle per point, drawn in input order.
std::string render_scatter(const ScatterData& data);

struct Curve {
    std::vector<double> ys;  // plotted against 1..m
    std::string color = "#000000";
    double width = 1.0;
};

struct CurveData {
    std::vector<Curve> curves;
    std::vector<LegendEntry> legend;
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// One polyline per curve, drawn in input order.
std::string render_curves(const CurveData& data);

struct HeatmapData {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    Eigen::MatrixXd values;  // rows x cols, NaN for empty cells
    std::string title;
};

/// Cells shaded from white (minimum) to dark blue (maximum), with the value
/// printed in each cell.
std::string render_heatmap(const HeatmapData& data);

// --- building plots from pipeline outputs ---------------------------------

/// Scree curves of every individual, singletons first and then by family
/// size, each group in input order.
CurveData scree_curves(const Eigen::MatrixXd& smoothed, const std::vector<std::size_t>& family_size_of);

/// Per-component median of the rows whose family size equals `size`.
Eigen::VectorXd class_median(const Eigen::MatrixXd& smoothed, const std::vector<std::size_t>& family_size_of,
                             std::size_t size);

enum class Metric { Swiss, Rse };

Metric parse_metric(std::string_view name);

/// Bench table (design,n,prop,method,replicate,swiss,rse): methods by grid
/// cell, averaged over replicates.
HeatmapData heatmap_from_bench(const io::Table& table, Metric metric);

/// Evaluate table (method,component,swiss,rse): methods by component.
HeatmapData heatmap_from_metrics(const io::Table& table, Metric metric);

// --- file-level rendering ------------------------------------------------

enum class PlotKind { Scatter, ScreeCurves, Heatmap };
enum class Highlight { None, Strata, FamilySize, Family };

PlotKind parse_kind(std::string_view name);

struct PlotSpec {
    PlotKind kind = PlotKind::Scatter;
    /// Scatter: scores CSV. ScreeCurves: smoothed scree CSV. Heatmap: bench
    /// or evaluate CSV.
    std::vector<std::string> inputs;
    std::string families;  // family file, for FamilySize / Family highlights and scree classes
    std::string strata;    // strata CSV, for the Strata highlight
    Highlight highlight = Highlight::None;
    std::string family_id;  // for Highlight::Family
    Index x = 1;            // 1-based score components for scatter
    Index y = 2;
    Metric metric = Metric::Swiss;
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Reads the inputs and returns the SVG document. Throws ParseError for
/// unreadable inputs and UnknownId for ids that do not resolve.
std::string render(const PlotSpec& spec);

}  // namespace famscore::report
