// Copyright 2026 The z2chaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "z2chaos/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "z2chaos/io.hpp"

namespace z2chaos {

namespace {

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out.push_back(c);
        }
    }
    return out;
}

std::string num(double v) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(2) << v;
    return o.str();
}

std::string tick_label(double v, double span) {
    if (std::abs(v) < 1e-9 * span) {
        v = 0.0;
    }
    std::ostringstream o;
    o << std::setprecision(3) << v;
    return o.str();
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgPlot::set_y_range(double lo, double hi) {
    if (!(hi > lo)) {
        throw std::invalid_argument("empty y range");
    }
    fixed_y_ = true;
    y_lo_ = lo;
    y_hi_ = hi;
}

void SvgPlot::add_line(const std::vector<double> &x, const std::vector<double> &y,
                       const std::string &label, const std::string &color,
                       bool dashed, bool markers) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("series x and y lengths differ");
    }
    if (x.empty()) {
        return;
    }
    series_.push_back({x, y, label, color, dashed, markers, false, false});
}

void SvgPlot::add_histogram(const std::vector<double> &edges,
                            const std::vector<double> &heights,
                            const std::string &label, const std::string &color) {
    if (edges.size() != heights.size() + 1 || heights.empty()) {
        throw std::invalid_argument("histogram needs one more edge than bins");
    }
    series_.push_back({edges, heights, label, color, false, false, true, false});
}

void SvgPlot::add_hline(double y, const std::string &label,
                        const std::string &color, bool dashed) {
    series_.push_back({{}, {y}, label, color, dashed, false, false, true});
}

std::string SvgPlot::render(int width, int height) const {
    const double left = 70;
    const double right = 170;
    const double top = 40;
    const double bottom = 55;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    auto tx = [this](double v) { return log_x_ ? std::log10(v) : v; };
    auto ty = [this](double v) { return log_y_ ? std::log10(v) : v; };
    auto usable_x = [this](double v) { return std::isfinite(v) && (!log_x_ || v > 0); };
    auto usable_y = [this](double v) { return std::isfinite(v) && (!log_y_ || v > 0); };

    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto &s : series_) {
        for (double v : s.x) {
            if (usable_x(v)) {
                x0 = std::min(x0, tx(v));
                x1 = std::max(x1, tx(v));
            }
        }
        for (double v : s.y) {
            if (usable_y(v)) {
                y0 = std::min(y0, ty(v));
                y1 = std::max(y1, ty(v));
            }
        }
        if (s.histogram && !log_y_) {
            y0 = std::min(y0, 0.0);
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0;
        x1 = 1;
    }
    if (fixed_y_) {
        y0 = ty(y_lo_);
        y1 = ty(y_hi_);
    }
    if (!std::isfinite(y0)) {
        y0 = 0;
        y1 = 1;
    }
    if (x1 <= x0) {
        x1 = x0 + 1;
    }
    if (y1 <= y0) {
        y1 = y0 + 1;
    }
    const double pad = 0.05 * (y1 - y0);
    if (!fixed_y_) {
        y1 += pad;
        if (y0 != 0.0) {
            y0 -= pad;
        }
    }
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) {
        const double c = std::clamp(ty(v), y0, y1);
        return top + (1.0 - (c - y0) / (y1 - y0)) * ph;
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title_) << "</text>\n";
    o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Ticks: decades on log axes, five even steps otherwise.
    auto ticks = [](double lo, double hi, bool log) {
        std::vector<double> t;
        if (log) {
            for (double e = std::ceil(lo); e <= std::floor(hi) + 1e-9; e += 1.0) {
                t.push_back(e);
            }
        }
        if (t.size() < 2) {
            t.clear();
            for (int k = 0; k <= 5; ++k) {
                t.push_back(lo + (hi - lo) * k / 5.0);
            }
        }
        return t;
    };
    for (double t : ticks(x0, x1, log_x_)) {
        const double v = log_x_ ? std::pow(10.0, t) : t;
        const double x = left + (t - x0) / (x1 - x0) * pw;
        o << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x)
          << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18)
          << "\" text-anchor=\"middle\">" << tick_label(v, x1 - x0) << "</text>\n";
    }
    for (double t : ticks(y0, y1, log_y_)) {
        const double v = log_y_ ? std::pow(10.0, t) : t;
        const double y = top + (1.0 - (t - y0) / (y1 - y0)) * ph;
        o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left)
          << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4)
          << "\" text-anchor=\"end\">" << tick_label(v, y1 - y0) << "</text>\n";
    }
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 12.0)
      << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
    o << "<text transform=\"translate(18," << num(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_) << "</text>\n";

    int legend = 0;
    for (const auto &s : series_) {
        const std::string dash = s.dashed ? " stroke-dasharray=\"6,4\"" : "";
        if (s.hline) {
            const double y = py(s.y[0]);
            o << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\""
              << num(left + pw) << "\" y2=\"" << num(y) << "\" stroke=\"" << s.color
              << "\" stroke-width=\"1.5\"" << dash << "/>\n";
        } else if (s.histogram) {
            for (std::size_t k = 0; k < s.y.size(); ++k) {
                const double xa = px(s.x[k]);
                const double xb = px(s.x[k + 1]);
                const double ya = py(s.y[k]);
                const double yb = py(log_y_ ? std::pow(10.0, y0) : std::max(y0, 0.0));
                o << "<rect x=\"" << num(xa) << "\" y=\"" << num(ya) << "\" width=\""
                  << num(std::max(0.0, xb - xa)) << "\" height=\"" << num(std::max(0.0, yb - ya))
                  << "\" fill=\"" << s.color << "\" fill-opacity=\"0.3\" stroke=\"" << s.color
                  << "\"/>\n";
            }
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << s.color
              << "\" stroke-width=\"1.5\"" << dash << " points=\"";
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                if (usable_x(s.x[k]) && usable_y(s.y[k])) {
                    o << num(px(s.x[k])) << ',' << num(py(s.y[k])) << ' ';
                }
            }
            o << "\"/>\n";
            if (s.markers) {
                for (std::size_t k = 0; k < s.x.size(); ++k) {
                    if (usable_x(s.x[k]) && usable_y(s.y[k])) {
                        o << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\""
                          << num(py(s.y[k])) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
                    }
                }
            }
        }
        if (!s.label.empty()) {
            const double ly = top + 10 + 18.0 * legend++;
            const double lx = left + pw + 12;
            o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22)
              << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
              << dash << "/>\n";
            o << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4) << "\">"
              << escape(s.label) << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

void SvgPlot::write(const std::filesystem::path &path) const {
    write_text(path, render());
}

} // namespace z2chaos
