// Copyright 2026 The tvcbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tvcbias/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "tvcbias/error.hpp"

namespace tvc {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b",
                                    "#e377c2", "#17becf"};

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0
                                                                       : 10.0;
  return step * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + dir +
                                    (ec ? ": " + ec.message() : ""));
  }
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path);
}

LineChart::LineChart(std::string title, std::string x_label,
                     std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void LineChart::add_series(ChartSeries series) {
  series_.push_back(std::move(series));
}

std::string LineChart::render(int width, int height) const {
  const double left = 80, right = 180, top = 50, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  Range xr, yr;
  for (const auto& s : series_) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  xr.finish();
  yr.finish();
  const double xstep = nice_step(xr.hi - xr.lo, 8);
  const double ystep = nice_step(yr.hi - yr.lo, 6);
  const double x0 = std::floor(xr.lo / xstep) * xstep;
  const double x1 = std::ceil(xr.hi / xstep) * xstep;
  const double y0 = std::floor(yr.lo / ystep) * ystep;
  const double y1 = std::ceil(yr.hi / ystep) * ystep;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\" "
     << "font-size=\"15\">" << escape_xml(title_) << "</text>\n";

  // Grid and ticks.
  for (double v = x0; v <= x1 + xstep * 1e-9; v += xstep) {
    os << "<line x1=\"" << fmt_coord(px(v)) << "\" y1=\"" << top
       << "\" x2=\"" << fmt_coord(px(v)) << "\" y2=\"" << top + plot_h
       << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << fmt_coord(px(v)) << "\" y=\"" << top + plot_h + 18
       << "\" text-anchor=\"middle\">" << fmt_tick(v) << "</text>\n";
  }
  for (double v = y0; v <= y1 + ystep * 1e-9; v += ystep) {
    os << "<line x1=\"" << left << "\" y1=\"" << fmt_coord(py(v))
       << "\" x2=\"" << left + plot_w << "\" y2=\"" << fmt_coord(py(v))
       << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << fmt_coord(py(v) + 4)
       << "\" text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
     << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\">" << escape_xml(x_label_) << "</text>\n";
  os << "<text transform=\"translate(20," << top + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(y_label_)
     << "</text>\n";

  for (std::size_t k = 0; k < series_.size(); ++k) {
    const ChartSeries& s = series_[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.8\"";
    if (s.dashed) os << " stroke-dasharray=\"6,4\"";
    os << " points=\"";
    bool first = true;
    for (std::size_t j = 0; j < std::min(s.x.size(), s.y.size()); ++j) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      os << (first ? "" : " ") << fmt_coord(px(s.x[j])) << ','
         << fmt_coord(py(s.y[j]));
      first = false;
    }
    os << "\"/>\n";

    const double ly = top + 10 + 20.0 * static_cast<double>(k);
    const double lx = left + plot_w + 15;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25
       << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"1.8\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
       << "/>\n";
    os << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\">"
       << escape_xml(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace tvc
