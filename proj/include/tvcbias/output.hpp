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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tvc {

// Fixed 10 significant digits, '.' separator, no grouping. NaN becomes an
// empty field.
std::string format_number(double value);

// Creates `dir` (and parents) if needed; throws Error(kIo) on failure.
void ensure_directory(const std::string& dir);

// Writes `contents` to `path` atomically enough for our purposes; throws
// Error(kIo) naming the path on failure.
void write_text_file(const std::string& path, std::string_view contents);

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

// Minimal SVG line chart: frame, ticks, axis labels, legend, polylines.
class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label);

  void add_series(ChartSeries series);
  std::string render(int width = 800, int height = 500) const;

 private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<ChartSeries> series_;
};

}  // namespace tvc
