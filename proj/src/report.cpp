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


#include "famscore/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "famscore/error.hpp"

namespace famscore::report {

namespace {

constexpr double kLeft = 80.0;
constexpr double kRight = kWidth - 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = kHeight - 70.0;

std::string num(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    // "-0.00" and "0.00" must not differ between runs that round differently
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

std::string escape(std::string_view text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded(double lo, double hi) {
    if (!(lo <= hi)) return {0.0, 1.0};
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) return {lo - 1.0, hi + 1.0};
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : (f < 3.5 ? 2.0 : (f < 7.5 ? 5.0 : 10.0));
    return nice * mag;
}

std::string tick_label(double v, double step) {
    if (std::abs(v) < 1e-9 * step) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class Canvas {
public:
    Canvas(Range x, Range y) : x_(x), y_(y) {}

    double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kRight - kLeft); }
    double py(double v) const { return kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kBottom - kTop); }

    void axes(const std::string& x_label, const std::string& y_label, std::string& out) const {
        out += "<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
        out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kRight) + "\" y2=\"" +
               num(kBottom) + "\"/>\n";
        out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
               num(kTop) + "\"/>\n";
        out += "</g>\n<g class=\"ticks\" font-size=\"12\" fill=\"#000000\">\n";
        const double xs = nice_step(x_.hi - x_.lo);
        for (double t = std::ceil(x_.lo / xs) * xs; t <= x_.hi + 1e-9 * xs; t += xs) {
            const std::string p = num(px(t));
            out += "<line x1=\"" + p + "\" y1=\"" + num(kBottom) + "\" x2=\"" + p + "\" y2=\"" + num(kBottom + 5) +
                   "\" stroke=\"#000000\"/>\n";
            out += "<text x=\"" + p + "\" y=\"" + num(kBottom + 20) + "\" text-anchor=\"middle\">" + tick_label(t, xs) +
                   "</text>\n";
        }
        const double ys = nice_step(y_.hi - y_.lo);
        for (double t = std::ceil(y_.lo / ys) * ys; t <= y_.hi + 1e-9 * ys; t += ys) {
            const std::string p = num(py(t));
            out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + p + "\" x2=\"" + num(kLeft) + "\" y2=\"" + p +
                   "\" stroke=\"#000000\"/>\n";
            out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(t) + 4) + "\" text-anchor=\"end\">" +
                   tick_label(t, ys) + "</text>\n";
        }
        out += "</g>\n";
        out += "<text x=\"" + num(0.5 * (kLeft + kRight)) + "\" y=\"" + num(kHeight - 20.0) +
               "\" text-anchor=\"middle\" font-size=\"14\">" + escape(x_label) + "</text>\n";
        const std::string yl = num(0.5 * (kTop + kBottom));
        out += "<text x=\"20.00\" y=\"" + yl + "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20.00 " +
               yl + ")\">" + escape(y_label) + "</text>\n";
    }

private:
    Range x_;
    Range y_;
};

std::string open_svg(const std::string& title) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
           std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " + std::to_string(kHeight) +
           "\" font-family=\"sans-serif\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
           "\" fill=\"#ffffff\"/>\n";
    out += "<text x=\"" + num(kWidth / 2.0) + "\" y=\"28.00\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) +
           "</text>\n";
    return out;
}

void legend(const std::vector<LegendEntry>& entries, std::string& out) {
    if (entries.empty()) return;
    out += "<g class=\"legend\" font-size=\"12\">\n";
    double y = kTop + 10.0;
    for (const auto& e : entries) {
        out += "<rect x=\"" + num(kRight - 130.0) + "\" y=\"" + num(y - 9.0) + "\" width=\"10\" height=\"10\" fill=\"" +
               e.color + "\"/>\n";
        out += "<text x=\"" + num(kRight - 115.0) + "\" y=\"" + num(y) + "\">" + escape(e.label) + "</text>\n";
        y += 16.0;
    }
    out += "</g>\n";
}

Range finite_range(const std::vector<double>& values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const double v : values) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return padded(lo, hi);
}

}  // namespace

std::string_view size_class_color(std::size_t family_size) noexcept {
    switch (family_size) {
        case 0:
        case 1: return "#000000";
        case 2: return "#d62728";
        case 3: return "#2ca02c";
        case 4: return "#1f77b4";
        default: return "#9467bd";
    }
}

std::string render_scatter(const ScatterData& data) {
    std::vector<double> xs, ys;
    for (const auto& p : data.points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const Canvas c(finite_range(xs), finite_range(ys));
    std::string out = open_svg(data.title);
    c.axes(data.x_label, data.y_label, out);
    out += "<g class=\"points\" fill-opacity=\"0.8\">\n";
    for (const auto& p : data.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        out += "<circle cx=\"" + num(c.px(p.x)) + "\" cy=\"" + num(c.py(p.y)) + "\" r=\"3\" fill=\"" + p.color + "\"/>\n";
    }
    out += "</g>\n";
    legend(data.legend, out);
    out += "</svg>\n";
    return out;
}

std::string render_curves(const CurveData& data) {
    std::vector<double> ys;
    std::size_t m = 0;
    for (const auto& curve : data.curves) {
        ys.insert(ys.end(), curve.ys.begin(), curve.ys.end());
        m = std::max(m, curve.ys.size());
    }
    const Range xr = m > 1 ? Range{0.5, static_cast<double>(m) + 0.5} : Range{0.0, 2.0};
    const Canvas c(xr, finite_range(ys));
    std::string out = open_svg(data.title);
    c.axes(data.x_label, data.y_label, out);
    out += "<g class=\"curves\" fill=\"none\" stroke-opacity=\"0.6\">\n";
    for (const auto& curve : data.curves) {
        std::string pts;
        for (std::size_t i = 0; i < curve.ys.size(); ++i) {
            if (!std::isfinite(curve.ys[i])) continue;
            if (!pts.empty()) pts += ' ';
            pts += num(c.px(static_cast<double>(i + 1))) + "," + num(c.py(curve.ys[i]));
        }
        if (pts.empty()) continue;
        out += "<polyline points=\"" + pts + "\" stroke=\"" + curve.color + "\" stroke-width=\"" + num(curve.width) +
               "\"/>\n";
    }
    out += "</g>\n";
    legend(data.legend, out);
    out += "</svg>\n";
    return out;
}

std::string render_heatmap(const HeatmapData& data) {
    const auto nr = data.rows.size();
    const auto nc = data.cols.size();
    if (data.values.rows() != static_cast<Index>(nr) || data.values.cols() != static_cast<Index>(nc)) {
        throw Error(ErrorCode::DimensionMismatch, "heatmap values must be rows x cols");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index i = 0; i < data.values.size(); ++i) {
        const double v = data.values.data()[i];
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::string out = open_svg(data.title);
    const double left = 150.0;
    const double top = 130.0;
    const double right = kWidth - 30.0;
    const double bottom = kHeight - 50.0;
    const double cw = nc > 0 ? (right - left) / static_cast<double>(nc) : 0.0;
    const double ch = nr > 0 ? (bottom - top) / static_cast<double>(nr) : 0.0;
    out += "<g class=\"labels\" font-size=\"12\">\n";
    for (std::size_t c = 0; c < nc; ++c) {
        const std::string x = num(left + (static_cast<double>(c) + 0.5) * cw);
        const std::string y = num(top - 8.0);
        out += "<text x=\"" + x + "\" y=\"" + y + "\" transform=\"rotate(-40 " + x + " " + y + ")\">" +
               escape(data.cols[c]) + "</text>\n";
    }
    for (std::size_t r = 0; r < nr; ++r) {
        out += "<text x=\"" + num(left - 8.0) + "\" y=\"" + num(top + (static_cast<double>(r) + 0.5) * ch + 4.0) +
               "\" text-anchor=\"end\">" + escape(data.rows[r]) + "</text>\n";
    }
    out += "</g>\n<g class=\"cells\" font-size=\"11\">\n";
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double v = data.values(static_cast<Index>(r), static_cast<Index>(c));
            const double x = left + static_cast<double>(c) * cw;
            const double y = top + static_cast<double>(r) * ch;
            std::string fill = "#dddddd";
            std::string ink = "#000000";
            std::string text = "NA";
            if (std::isfinite(v)) {
                const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
                char buf[8];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(255 - t * (255 - 8))),
                              static_cast<int>(std::lround(255 - t * (255 - 48))),
                              static_cast<int>(std::lround(255 - t * (255 - 107))));
                fill = buf;
                if (t > 0.6) ink = "#ffffff";
                text = num(v, 3);
            }
            out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw) + "\" height=\"" + num(ch) +
                   "\" fill=\"" + fill + "\" stroke=\"#ffffff\"/>\n";
            out += "<text x=\"" + num(x + 0.5 * cw) + "\" y=\"" + num(y + 0.5 * ch + 4.0) +
                   "\" text-anchor=\"middle\" fill=\"" + ink + "\">" + text + "</text>\n";
        }
    }
    out += "</g>\n";
    if (std::isfinite(lo)) {
        out += "<text x=\"" + num(left) + "\" y=\"" + num(kHeight - 20.0) + "\" font-size=\"12\">range " + num(lo, 3) +
               " (white) to " + num(hi, 3) + " (blue)</text>\n";
    }
    out += "</svg>\n";
    return out;
}

CurveData scree_curves(const Eigen::MatrixXd& smoothed, const std::vector<std::size_t>& family_size_of) {
    if (static_cast<Index>(family_size_of.size()) != smoothed.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "one family size per scree row required");
    }
    std::vector<std::size_t> order(family_size_of.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return family_size_of[a] < family_size_of[b]; });
    CurveData out;
    std::map<std::size_t, bool> classes;
    for (const auto j : order) {
        Curve c;
        c.ys.assign(smoothed.row(static_cast<Index>(j)).data(), smoothed.row(static_cast<Index>(j)).data() + 0);
        c.ys.resize(static_cast<std::size_t>(smoothed.cols()));
        for (Index l = 0; l < smoothed.cols(); ++l) c.ys[static_cast<std::size_t>(l)] = smoothed(static_cast<Index>(j), l);
        const auto size = std::max<std::size_t>(1, family_size_of[j]);
        c.color = std::string(size_class_color(size));
        out.curves.push_back(std::move(c));
        classes[std::min<std::size_t>(size, 5)] = true;
    }
    for (const auto& [size, present] : classes) {
        const std::string label = size == 1 ? "singletons" : (size >= 5 ? "families of 5+" : "families of " + std::to_string(size));
        out.legend.push_back({label, std::string(size_class_color(size))});
    }
    out.title = "Individual scree values";
    out.x_label = "component";
    out.y_label = "log10 scree value (loess)";
    return out;
}

Eigen::VectorXd class_median(const Eigen::MatrixXd& smoothed, const std::vector<std::size_t>& family_size_of,
                             std::size_t size) {
    if (static_cast<Index>(family_size_of.size()) != smoothed.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "one family size per scree row required");
    }
    std::vector<Index> rows;
    for (std::size_t j = 0; j < family_size_of.size(); ++j) {
        if (std::max<std::size_t>(1, family_size_of[j]) == size) rows.push_back(static_cast<Index>(j));
    }
    if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "no individuals in family size class " + std::to_string(size));
    Eigen::VectorXd out(smoothed.cols());
    std::vector<double> col(rows.size());
    for (Index l = 0; l < smoothed.cols(); ++l) {
        for (std::size_t r = 0; r < rows.size(); ++r) col[r] = smoothed(rows[r], l);
        std::sort(col.begin(), col.end());
        const auto h = col.size() / 2;
        out(l) = col.size() % 2 == 1 ? col[h] : 0.5 * (col[h - 1] + col[h]);
    }
    return out;
}

Metric parse_metric(std::string_view name) {
    if (name == "swiss") return Metric::Swiss;
    if (name == "rse") return Metric::Rse;
    throw Error(ErrorCode::ParseError, "unknown metric '" + std::string(name) + "' (swiss, rse)");
}

namespace {

// Rows keyed by first appearance, cells averaged.
class Accumulator {
public:
    void add(const std::string& row, const std::string& col, double v) {
        const auto r = slot(rows_, row);
        const auto c = slot(cols_, col);
        auto& cell = cells_[{r, c}];
        cell.first += v;
        cell.second += 1.0;
    }

    HeatmapData finish(std::string title) const {
        HeatmapData out;
        out.rows = rows_;
        out.cols = cols_;
        out.values = Eigen::MatrixXd::Constant(static_cast<Index>(rows_.size()), static_cast<Index>(cols_.size()),
                                               std::numeric_limits<double>::quiet_NaN());
        for (const auto& [key, cell] : cells_) {
            out.values(static_cast<Index>(key.first), static_cast<Index>(key.second)) = cell.first / cell.second;
        }
        out.title = std::move(title);
        return out;
    }

    void sort_cols(const std::vector<std::size_t>& order) {
        std::vector<std::string> cols;
        std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> cells;
        std::vector<std::size_t> where(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            cols.push_back(cols_[order[i]]);
            where[order[i]] = i;
        }
        for (const auto& [key, cell] : cells_) cells[{key.first, where[key.second]}] = cell;
        cols_ = std::move(cols);
        cells_ = std::move(cells);
    }

    std::size_t col_count() const { return cols_.size(); }

private:
    static std::size_t slot(std::vector<std::string>& names, const std::string& name) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
        names.push_back(name);
        return names.size() - 1;
    }

    std::vector<std::string> rows_;
    std::vector<std::string> cols_;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> cells_;
};

const char* metric_column(Metric m) { return m == Metric::Swiss ? "swiss" : "rse"; }

}  // namespace

HeatmapData heatmap_from_bench(const io::Table& table, Metric metric) {
    const auto design = table.column("design");
    const auto n = table.column("n");
    const auto prop = table.column("prop");
    const auto method = table.column("method");
    const auto value = table.column(metric_column(metric));
    Accumulator acc;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row[value] == "NA") continue;
        acc.add(row[method], row[design] + " n=" + row[n] + " prop=" + row[prop], io::parse_double(row[value], r + 2));
    }
    return acc.finish(std::string(metric == Metric::Swiss ? "SWISS" : "RSE") + ", mean over replicates");
}

HeatmapData heatmap_from_metrics(const io::Table& table, Metric metric) {
    const auto method = table.column("method");
    const auto component = table.column("component");
    const auto value = table.column(metric_column(metric));
    Accumulator acc;
    std::vector<long long> numbers;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row[value] == "NA") continue;
        const auto l = io::parse_integer(row[component], r + 2);
        const std::string label = "component " + std::to_string(l);
        const auto before = acc.col_count();
        acc.add(row[method], label, io::parse_double(row[value], r + 2));
        if (acc.col_count() > before) numbers.push_back(l);
    }
    std::vector<std::size_t> order(numbers.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return numbers[a] < numbers[b]; });
    acc.sort_cols(order);
    return acc.finish(std::string(metric == Metric::Swiss ? "SWISS" : "RSE") + " by component");
}

PlotKind parse_kind(std::string_view name) {
    if (name == "scatter") return PlotKind::Scatter;
    if (name == "scree") return PlotKind::ScreeCurves;
    if (name == "heatmap") return PlotKind::Heatmap;
    throw Error(ErrorCode::ParseError, "unknown plot kind '" + std::string(name) + "' (scatter, scree, heatmap)");
}

namespace {

const std::string& single_input(const PlotSpec& spec, const char* what) {
    if (spec.inputs.size() != 1) {
        throw Error(ErrorCode::InvalidArgument, std::string("this plot takes exactly one ") + what + " input");
    }
    return spec.inputs.front();
}

std::string or_default(const std::string& s, std::string fallback) { return s.empty() ? fallback : s; }

std::string render_scatter_spec(const PlotSpec& spec) {
    const auto scores = io::parse_scores_csv(io::read_text(single_input(spec, "scores")));
    const Index k = scores.scores.cols();
    for (const Index c : {spec.x, spec.y}) {
        if (c < 1 || (c > k && scores.scores.rows() > 0)) {
            throw Error(ErrorCode::InvalidArgument, "component " + std::to_string(c) + " not in the scores file (k = " +
                                                        std::to_string(k) + ")");
        }
    }
    const auto n = scores.individual_ids.size();
    std::vector<std::string> colors(n, "#000000");
    std::vector<int> rank(n, 0);  // drawing order: lower first
    ScatterData data;
    switch (spec.highlight) {
        case Highlight::None: break;
        case Highlight::Strata: {
            if (spec.strata.empty()) throw Error(ErrorCode::InvalidArgument, "strata highlight needs a strata file");
            const auto strata = io::parse_strata_csv(io::read_text(spec.strata), scores.individual_ids);
            std::map<int, bool> seen;
            for (std::size_t j = 0; j < n; ++j) {
                colors[j] = std::string(kPalette[static_cast<std::size_t>(strata[j] - 1) % kPalette.size()]);
                seen[strata[j]] = true;
            }
            for (const auto& [s, present] : seen) {
                data.legend.push_back({"stratum " + std::to_string(s), std::string(kPalette[static_cast<std::size_t>(s - 1) % kPalette.size()])});
            }
            break;
        }
        case Highlight::FamilySize:
        case Highlight::Family: {
            if (spec.families.empty()) throw Error(ErrorCode::InvalidArgument, "family highlight needs a family file");
            const auto fam = io::parse_families(io::read_text(spec.families), scores.individual_ids);
            if (spec.highlight == Highlight::FamilySize) {
                const auto sizes = fam.family_size_of();
                std::map<std::size_t, bool> seen;
                for (std::size_t j = 0; j < n; ++j) {
                    colors[j] = std::string(size_class_color(sizes[j]));
                    rank[j] = static_cast<int>(std::min<std::size_t>(sizes[j], 5));
                    seen[std::min<std::size_t>(sizes[j], 5)] = true;
                }
                for (const auto& [size, present] : seen) {
                    const std::string label = size == 1 ? "singletons" : (size >= 5 ? "families of 5+" : "families of " + std::to_string(size));
                    data.legend.push_back({label, std::string(size_class_color(size))});
                }
            } else {
                const auto& ids = fam.family_ids();
                const auto it = std::find(ids.begin(), ids.end(), spec.family_id);
                if (it == ids.end()) throw Error(ErrorCode::UnknownId, "unknown family '" + spec.family_id + "'");
                std::fill(colors.begin(), colors.end(), "#bbbbbb");
                for (const auto j : fam.families()[static_cast<std::size_t>(it - ids.begin())]) {
                    colors[j] = "#d62728";
                    rank[j] = 1;
                }
                data.legend = {{"family " + spec.family_id, "#d62728"}, {"others", "#bbbbbb"}};
            }
            break;
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
    for (const auto j : order) {
        const auto r = static_cast<Index>(j);
        data.points.push_back({scores.scores(r, spec.x - 1), scores.scores(r, spec.y - 1), colors[j]});
    }
    data.title = or_default(spec.title, "Ancestry scores");
    data.x_label = or_default(spec.x_label, "score " + std::to_string(spec.x));
    data.y_label = or_default(spec.y_label, "score " + std::to_string(spec.y));
    return render_scatter(data);
}

std::string render_scree_spec(const PlotSpec& spec) {
    const auto scree = io::parse_matrix_csv(io::read_text(single_input(spec, "scree")));
    std::vector<std::size_t> sizes(scree.individual_ids.size(), 1);
    if (!spec.families.empty()) {
        sizes = io::parse_families(io::read_text(spec.families), scree.individual_ids).family_size_of();
    }
    auto data = scree_curves(scree.scores, sizes);
    data.title = or_default(spec.title, data.title);
    data.x_label = or_default(spec.x_label, data.x_label);
    data.y_label = or_default(spec.y_label, data.y_label);
    return render_curves(data);
}

std::string render_heatmap_spec(const PlotSpec& spec) {
    const auto table = io::parse_table(io::read_text(single_input(spec, "metrics")), ',');
    auto has = [&](const char* name) {
        return std::find(table.header.begin(), table.header.end(), name) != table.header.end();
    };
    HeatmapData data;
    if (has("replicate")) data = heatmap_from_bench(table, spec.metric);
    else if (has("component")) data = heatmap_from_metrics(table, spec.metric);
    else throw Error(ErrorCode::ParseError, "heatmap input is neither a bench nor an evaluate table");
    data.title = or_default(spec.title, data.title);
    return render_heatmap(data);
}

}  // namespace

std::string render(const PlotSpec& spec) {
    switch (spec.kind) {
        case PlotKind::Scatter: return render_scatter_spec(spec);
        case PlotKind::ScreeCurves: return render_scree_spec(spec);
        case PlotKind::Heatmap: return render_heatmap_spec(spec);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown plot kind");
}

}  // namespace famscore::report
