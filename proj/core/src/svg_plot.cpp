/*
   Copyright 2026 The Ethergy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <ethergy/svg_plot.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <ethergy/csv.hpp>
#include <ethergy/errors.hpp>

namespace ethergy {

namespace {

constexpr double kWidth = 960, kHeight = 540;
constexpr double kLeft = 78, kRight = 84, kTop = 34, kBottom = 56;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

std::string px(double v) { return csv::format_fixed(v, 3); }

std::string esc(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double cell_w{0};    // px per day
    double y_scale{0};   // px per value unit
    double y_max{0};
    std::size_t days{0};

    double x_left(std::size_t i) const { return kLeft + static_cast<double>(i) * cell_w; }
    double x_center(std::size_t i) const { return x_left(i) + cell_w / 2; }
    double y(double value) const { return kTop + kPlotH - value * y_scale; }
};

Frame make_frame(std::size_t days, double max_value) {
    Frame f;
    f.days = days;
    f.cell_w = kPlotW / static_cast<double>(days);
    f.y_max = max_value <= 0 ? 1.0 : max_value * 1.05;
    f.y_scale = kPlotH / f.y_max;
    return f;
}

std::string header(std::string_view title) {
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
           px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\">\n";
    svg += "<style>text{font-family:sans-serif;font-size:12px;fill:#333}"
           ".title{font-size:15px}.axis{stroke:#555;stroke-width:1}"
           ".grid{stroke:#ddd;stroke-width:0.5}</style>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text class=\"title\" x=\"" + px(kLeft) + "\" y=\"22\">" + std::string(esc(title)) +
           "</text>\n";
    return svg;
}

void draw_axes(std::string& svg, const Frame& f, std::span<const Date> dates,
               std::string_view y_label, std::string_view y2_label, double y2_per_unit) {
    svg += "<line class=\"axis\" x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop + kPlotH) + "\" x2=\"" +
           px(kLeft + kPlotW) + "\" y2=\"" + px(kTop + kPlotH) + "\"/>\n";
    svg += "<line class=\"axis\" x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop) + "\" x2=\"" +
           px(kLeft) + "\" y2=\"" + px(kTop + kPlotH) + "\"/>\n";

    // x ticks: at most 6, at day-cell centers
    const std::size_t step = std::max<std::size_t>(1, (f.days + 5) / 6);
    for (std::size_t i = 0; i < f.days; i += step) {
        const double x = f.x_center(i);
        svg += "<line class=\"axis\" x1=\"" + px(x) + "\" y1=\"" + px(kTop + kPlotH) + "\" x2=\"" +
               px(x) + "\" y2=\"" + px(kTop + kPlotH + 5) + "\"/>\n";
        svg += "<text x=\"" + px(x - 32) + "\" y=\"" + px(kTop + kPlotH + 20) + "\">" +
               dates[i].to_string() + "</text>\n";
    }

    // y ticks: 5 even divisions, grid lines across
    for (int k = 0; k <= 5; ++k) {
        const double value = f.y_max * k / 5.0;
        const double y = f.y(value);
        if (k > 0) {
            svg += "<line class=\"grid\" x1=\"" + px(kLeft) + "\" y1=\"" + px(y) + "\" x2=\"" +
                   px(kLeft + kPlotW) + "\" y2=\"" + px(y) + "\"/>\n";
        }
        svg += "<text x=\"" + px(kLeft - 52) + "\" y=\"" + px(y + 4) + "\">" +
               csv::format_fixed(value, value < 10 ? 2 : 0) + "</text>\n";
        if (y2_per_unit > 0) {
            svg += "<text x=\"" + px(kLeft + kPlotW + 8) + "\" y=\"" + px(y + 4) + "\">" +
                   csv::format_fixed(value * y2_per_unit, value * y2_per_unit < 10 ? 2 : 0) +
                   "</text>\n";
        }
    }
    svg += "<text transform=\"rotate(-90)\" x=\"" + px(-(kTop + kPlotH / 2)) + "\" y=\"16\">" +
           std::string(esc(y_label)) + "</text>\n";
    if (!y2_label.empty()) {
        svg += "<text transform=\"rotate(-90)\" x=\"" + px(-(kTop + kPlotH / 2)) + "\" y=\"" +
               px(kWidth - 10) + "\">" + std::string(esc(y2_label)) + "</text>\n";
    }
}

/// Step polygon over day cells: lows left to right, highs right to left.
std::string band_path(const Frame& f, std::span<const double> lows,
                      std::span<const double> highs) {
    std::string d;
    for (std::size_t i = 0; i < f.days; ++i) {
        const double yl = f.y(lows[i]);
        d += (i == 0 ? "M" : "L") + px(f.x_left(i)) + "," + px(yl);
        d += "L" + px(f.x_left(i + 1)) + "," + px(yl);
    }
    for (std::size_t i = f.days; i-- > 0;) {
        const double yh = f.y(highs[i]);
        d += "L" + px(f.x_left(i + 1)) + "," + px(yh);
        d += "L" + px(f.x_left(i)) + "," + px(yh);
    }
    d += "Z";
    return d;
}

std::string polyline(const Frame& f, std::span<const double> values, std::string_view color) {
    std::string pts;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) pts += " ";
        pts += px(f.x_center(i)) + "," + px(f.y(values[i]));
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
}

struct BandSpec {
    std::string title;
    std::string y_label;
    std::string y2_label;  // empty = single axis
    double unit_scale;     // data value -> plotted unit
    double y2_per_unit;    // plotted unit -> right-axis unit (0 = none)
};

std::string render_band_figure(std::span<const DailyEstimate> daily, const BandSpec& spec,
                               const std::function<Bounds(const DailyEstimate&)>& select) {
    if (daily.empty()) throw ValidationError("empty daily series");
    std::vector<Date> dates;
    std::vector<double> lows, bests, highs;
    double max_v = 0;
    for (const auto& d : daily) {
        const Bounds b = select(d);
        dates.push_back(d.date);
        lows.push_back(b.low * spec.unit_scale);
        bests.push_back(b.best * spec.unit_scale);
        highs.push_back(b.high * spec.unit_scale);
        max_v = std::max(max_v, b.high * spec.unit_scale);
    }
    const Frame f = make_frame(daily.size(), max_v);

    std::string svg = header(spec.title);
    draw_axes(svg, f, dates, spec.y_label, spec.y2_label, spec.y2_per_unit);
    svg += "<path class=\"band\" fill=\"#4a90d9\" fill-opacity=\"0.25\" stroke=\"none\" d=\"" +
           band_path(f, lows, highs) + "\" data-xscale=\"" + px(f.cell_w) + "\" data-yscale=\"" +
           csv::format_double(f.y_scale) + "\"/>\n";
    svg += polyline(f, bests, "#1f5fa8");
    if (daily.size() == 1) {
        svg += "<circle cx=\"" + px(f.x_center(0)) + "\" cy=\"" + px(f.y(bests[0])) +
               "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

const std::array<std::pair<std::string_view, std::string_view>, 5> kRegionBuckets{{
    {"asia/china", "#d1495b"},
    {"europe", "#4a90d9"},
    {"us", "#6ab04c"},
    {"russia/ukraine", "#f0932b"},
    {"unknown", "#b2bec3"},
}};

std::size_t bucket_of(std::string_view region) {
    if (region == "asia" || region == "china" || region == "seoul" || region == "singapore" ||
        region == "taiwan") {
        return 0;
    }
    if (region == "europe" || region == "europe-west" || region == "europe-north") return 1;
    if (region == "us" || region == "us-east" || region == "us-west") return 2;
    if (region == "russia" || region == "ukraine") return 3;
    return 4;
}

std::string render_regions(std::span<const BlockAttribution> attributions) {
    if (attributions.empty()) throw ValidationError("no attributions to plot");

    std::map<Date, std::array<double, 5>> days;
    std::map<Date, double> counts;
    for (const auto& a : attributions) {
        auto& shares = days[a.day];
        counts[a.day] += 1;
        if (a.method == AttributionMethod::unmapped) {
            shares[4] += 1;
            continue;
        }
        for (const auto& [region, weight] : a.region_mix) shares[bucket_of(region)] += weight;
    }

    std::vector<Date> dates;
    std::vector<std::array<double, 5>> shares;
    for (auto& [date, s] : days) {
        const double total = counts[date];
        std::array<double, 5> norm{};
        for (std::size_t b = 0; b < 5; ++b) norm[b] = s[b] / total;
        dates.push_back(date);
        shares.push_back(norm);
    }

    Frame f = make_frame(dates.size(), 1.0);
    f.y_max = 1.0;
    f.y_scale = kPlotH / f.y_max;

    std::string svg = header("Share of blocks by region group");
    draw_axes(svg, f, dates, "share of blocks", "", 0);

    std::vector<double> base(dates.size(), 0.0);
    for (std::size_t b = 0; b < 5; ++b) {
        std::vector<double> lows = base, highs(dates.size());
        for (std::size_t i = 0; i < dates.size(); ++i) {
            highs[i] = base[i] + shares[i][b];
        }
        svg += "<path fill=\"" + std::string(kRegionBuckets[b].second) +
               "\" fill-opacity=\"0.8\" stroke=\"none\" d=\"" + band_path(f, lows, highs) +
               "\"/>\n";
        base = highs;
    }
    // legend
    double ly = kTop + 8;
    for (const auto& [name, color] : kRegionBuckets) {
        svg += "<rect x=\"" + px(kLeft + kPlotW - 150) + "\" y=\"" + px(ly - 9) +
               "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n";
        svg += "<text x=\"" + px(kLeft + kPlotW - 135) + "\" y=\"" + px(ly) + "\">" +
               std::string(name) + "</text>\n";
        ly += 16;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace

Figure figure_from_string(std::string_view name) {
    if (name == "power") return Figure::power;
    if (name == "efficiency") return Figure::efficiency;
    if (name == "regions") return Figure::regions;
    if (name == "factors") return Figure::factors;
    if (name == "emissions") return Figure::emissions;
    throw ValidationError("unknown figure '" + std::string(name) +
                          "'; valid names: power, efficiency, regions, factors, emissions");
}

std::string_view to_string(Figure figure) {
    switch (figure) {
        case Figure::power: return "power";
        case Figure::efficiency: return "efficiency";
        case Figure::regions: return "regions";
        case Figure::factors: return "factors";
        case Figure::emissions: return "emissions";
    }
    return "power";
}

std::string render_figure(Figure figure, std::span<const DailyEstimate> daily,
                          std::span<const BlockAttribution> attributions, double hours_per_year) {
    switch (figure) {
        case Figure::power:
            return render_band_figure(
                daily,
                {"Network power", "GW", "TWh/yr annualized", 1e-9, hours_per_year / 1e3},
                [](const DailyEstimate& d) { return d.power_w; });
        case Figure::efficiency:
            return render_band_figure(daily, {"Hashing efficiency", "MH/s per W", "", 1.0, 0},
                                      [](const DailyEstimate& d) { return d.efficiency_mhs_w; });
        case Figure::factors:
            return render_band_figure(
                daily, {"Network emissions factor", "gCO2/kWh", "", 1.0, 0},
                [](const DailyEstimate& d) {
                    return Bounds{d.factor_gco2_kwh, d.factor_gco2_kwh, d.factor_gco2_kwh};
                });
        case Figure::emissions:
            return render_band_figure(daily,
                                      {"Emissions", "ktCO2/day", "MtCO2/yr annualized", 1e-3,
                                       365.25 / 1e3},
                                      [](const DailyEstimate& d) { return d.emissions_t; });
        case Figure::regions:
            return render_regions(attributions);
    }
    throw ValidationError("unknown figure");
}

}  // namespace ethergy
