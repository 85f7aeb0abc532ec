/*
Copyright 2026 The frustmag authors

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

#ifndef FRUSTMAG_SVG_HPP
#define FRUSTMAG_SVG_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace frustmag {

// Minimal line/scatter plot writer, enough for convergence and collapse
// figures.  Data series are drawn in a fixed palette; log axes are applied
// to the data before layout.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void set_log_x(bool v) { log_x_ = v; }
    void set_log_y(bool v) { log_y_ = v; }

    void add_series(const std::string& label, std::vector<double> x, std::vector<double> y,
                    bool points_only = false) {
        series_.push_back({label, std::move(x), std::move(y), points_only});
    }

    bool write(const std::string& path) const {
        std::ofstream os(path);
        if (!os) return false;
        render(os);
        return bool(os);
    }

private:
    struct Series {
        std::string label;
        std::vector<double> x, y;
        bool points_only;
    };

    static constexpr int kW = 720, kH = 480, kMargin = 64;
    static const char* color(std::size_t i) {
        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
        return palette[i % 8];
    }

    double tx(double v) const { return log_x_ ? std::log10(v) : v; }
    double ty(double v) const { return log_y_ ? std::log10(v) : v; }

    void render(std::ofstream& os) const {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if ((log_x_ && s.x[i] <= 0) || (log_y_ && s.y[i] <= 0)) continue;
                xmin = std::min(xmin, tx(s.x[i]));
                xmax = std::max(xmax, tx(s.x[i]));
                ymin = std::min(ymin, ty(s.y[i]));
                ymax = std::max(ymax, ty(s.y[i]));
            }
        if (xmin > xmax) {
            xmin = 0;
            xmax = 1;
        }
        if (ymin > ymax) {
            ymin = 0;
            ymax = 1;
        }
        if (xmax - xmin < 1e-12) xmax = xmin + 1;
        if (ymax - ymin < 1e-12) ymax = ymin + 1;
        auto px = [&](double v) {
            return kMargin + (tx(v) - xmin) / (xmax - xmin) * (kW - 2 * kMargin);
        };
        auto py = [&](double v) {
            return kH - kMargin - (ty(v) - ymin) / (ymax - ymin) * (kH - 2 * kMargin);
        };

        os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
           << "' viewBox='0 0 " << kW << ' ' << kH << "'>\n";
        os << "<rect width='100%' height='100%' fill='white'/>\n";
        os << "<text x='" << kW / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title_
           << "</text>\n";
        os << "<line x1='" << kMargin << "' y1='" << kH - kMargin << "' x2='" << kW - kMargin
           << "' y2='" << kH - kMargin << "' stroke='black'/>\n";
        os << "<line x1='" << kMargin << "' y1='" << kMargin << "' x2='" << kMargin << "' y2='"
           << kH - kMargin << "' stroke='black'/>\n";
        for (int i = 0; i <= 4; ++i) {
            double fx = xmin + (xmax - xmin) * i / 4.0;
            double fy = ymin + (ymax - ymin) * i / 4.0;
            double vx = log_x_ ? std::pow(10.0, fx) : fx;
            double vy = log_y_ ? std::pow(10.0, fy) : fy;
            double sx = kMargin + (kW - 2.0 * kMargin) * i / 4.0;
            double sy = kH - kMargin - (kH - 2.0 * kMargin) * i / 4.0;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", vx);
            os << "<text x='" << sx << "' y='" << kH - kMargin + 18
               << "' text-anchor='middle' font-size='11'>" << buf << "</text>\n";
            std::snprintf(buf, sizeof buf, "%.3g", vy);
            os << "<text x='" << kMargin - 6 << "' y='" << sy + 4
               << "' text-anchor='end' font-size='11'>" << buf << "</text>\n";
        }
        os << "<text x='" << kW / 2 << "' y='" << kH - 16 << "' text-anchor='middle' font-size='13'>"
           << xlabel_ << "</text>\n";
        os << "<text x='18' y='" << kH / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
           << kH / 2 << ")'>" << ylabel_ << "</text>\n";

        for (std::size_t si = 0; si < series_.size(); ++si) {
            const auto& s = series_[si];
            if (!s.points_only) {
                os << "<polyline fill='none' stroke='" << color(si) << "' stroke-width='1.5' points='";
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if ((log_x_ && s.x[i] <= 0) || (log_y_ && s.y[i] <= 0)) continue;
                    os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
                }
                os << "'/>\n";
            } else {
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if ((log_x_ && s.x[i] <= 0) || (log_y_ && s.y[i] <= 0)) continue;
                    os << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
                       << "' r='3' fill='" << color(si) << "'/>\n";
                }
            }
            os << "<text x='" << kW - kMargin + 4 << "' y='" << kMargin + 16 * si
               << "' font-size='11' fill='" << color(si) << "'>" << s.label << "</text>\n";
        }
        os << "</svg>\n";
    }

    std::string title_, xlabel_, ylabel_;
    bool log_x_ = false, log_y_ = false;
    std::vector<Series> series_;
};

}  // namespace frustmag

#endif
