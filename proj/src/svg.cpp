// SPDX-License-Identifier: Apache-2.0
//
// falawn — fluid-antenna base-station simulator and transmit-power optimizer
// Copyright (C) 2026 the falawn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "falawn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace falawn {

namespace {

constexpr double kWidth = 800.0, kHeight = 520.0;
constexpr double kLeft = 80.0, kRight = 40.0, kTop = 56.0, kBottom = 64.0;

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string &text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

std::string svg_chart_text(const ChartSpec &spec) {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool have = false;
    for (const auto &series : spec.series)
        for (const auto &[x, y] : series.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            if (!have) {
                xmin = xmax = x;
                ymin = ymax = y;
                have = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto sx = [&](double x) {
        return kLeft + plot_w * (x - xmin) / (xmax - xmin);
    };
    const auto sy = [&](double y) {
        return kTop + plot_h * (1.0 - (y - ymin) / (ymax - ymin));
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
       << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"17\">"
       << escape(spec.title) << "</text>\n";

    // frame and ticks
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        const double px = sx(fx);
        os << "<line x1=\"" << px << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << px
           << "\" y2=\"" << kTop + plot_h + 6 << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << px << "\" y=\"" << kTop + plot_h + 22
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"12\">"
           << fmt(fx) << "</text>\n";
        const double fy = ymin + (ymax - ymin) * i / ticks;
        const double py = sy(fy);
        os << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << py << "\" x2=\"" << kLeft
           << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
        os << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\""
           << kLeft + plot_w << "\" y2=\"" << py
           << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
        os << "<text x=\"" << kLeft - 10 << "\" y=\"" << py + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
           << fmt(fy) << "</text>\n";
    }
    os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"22\" y=\"" << kTop + plot_h / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
          "transform=\"rotate(-90 22 "
       << kTop + plot_h / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

    // series
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const char *color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::ostringstream pts;
        for (const auto &[x, y] : spec.series[s].points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            pts << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
        }
        os << "<polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
        for (const auto &[x, y] : spec.series[s].points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            os << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        // legend row
        const double ly = kTop + 14 + 18 * static_cast<double>(s);
        os << "<line x1=\"" << kLeft + plot_w - 150 << "\" y1=\"" << ly
           << "\" x2=\"" << kLeft + plot_w - 120 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kLeft + plot_w - 112 << "\" y=\"" << ly + 4
           << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << escape(spec.series[s].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg_chart(const ChartSpec &spec, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_svg_chart: cannot open " + path);
    out << svg_chart_text(spec);
}

} // namespace falawn
