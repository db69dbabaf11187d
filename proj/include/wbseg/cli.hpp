// Copyright 2026 The wbseg Authors
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

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wbseg/evaluation.hpp"
#include "wbseg/segmenter.hpp"

namespace wbseg::cli {

// Runs one command line (args excludes the program name). Returns the exit
// status: 0 on success, 2 on usage or runtime errors.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

struct TuneGrid {
  std::vector<double> thresholds;
  std::vector<std::size_t> beam_widths;
  std::vector<Window> windows;

  // Contains both backends' tuned operating points.
  static TuneGrid defaults();
  std::size_t size() const {
    return thresholds.size() * beam_widths.size() * windows.size();
  }
};

struct TunePoint {
  double threshold;
  std::size_t beam_width;
  Window window;
  double precision;
  double elapsed_seconds;
};

struct TuneResult {
  std::vector<TunePoint> table;  // grid order
  TunePoint best;                // highest precision, then least time
};

// Evaluates every grid point with `run_point`. Throws InputError on an
// empty grid.
TuneResult tune(const TuneGrid& grid, const SegmenterConfig& base,
                const std::function<EvalReport(const SegmenterConfig&)>& run_point);

// "inf" (or "unbounded") or a positive integer.
Window parse_window(const std::string& text);
std::string window_name(Window w);

}  // namespace wbseg::cli
