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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace z2chaos {

/// Small static SVG chart: line series, step histograms, horizontal
/// reference lines, optional log axes.
class SvgPlot {
  public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void set_log_x(bool on) { log_x_ = on; }
    void set_log_y(bool on) { log_y_ = on; }
    void set_y_range(double lo, double hi);

    void add_line(const std::vector<double> &x, const std::vector<double> &y,
                  const std::string &label, const std::string &color,
                  bool dashed = false, bool markers = false);
    /// Bars from bin edges; edges.size() == heights.size() + 1.
    void add_histogram(const std::vector<double> &edges,
                       const std::vector<double> &heights,
                       const std::string &label, const std::string &color);
    void add_hline(double y, const std::string &label, const std::string &color,
                   bool dashed = true);

    [[nodiscard]] bool empty() const { return series_.empty(); }
    [[nodiscard]] std::string render(int width = 640, int height = 420) const;
    void write(const std::filesystem::path &path) const;

  private:
    struct Series {
        std::vector<double> x;
        std::vector<double> y;
        std::string label;
        std::string color;
        bool dashed = false;
        bool markers = false;
        bool histogram = false;
        bool hline = false;
    };
    std::string title_;
    std::string x_label_;
    std::string y_label_;
    bool log_x_ = false;
    bool log_y_ = false;
    bool fixed_y_ = false;
    double y_lo_ = 0.0;
    double y_hi_ = 1.0;
    std::vector<Series> series_;
};

} // namespace z2chaos
