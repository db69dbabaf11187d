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
#include <string>
#include <string_view>
#include <vector>

#include "wbseg/corpus.hpp"
#include "wbseg/text.hpp"

namespace wbseg {

// STRICT compares every boundary; ALNUM only boundaries whose two
// neighbouring symbols are both letters or digits.
enum class EvalMode { kStrict, kAlnum };

std::string_view to_string(EvalMode mode);
// Accepts "strict" or "alnum"; throws ConfigError otherwise.
EvalMode parse_eval_mode(std::string_view name);

// Stripped-symbol indices preceded by a boundary (or any whitespace).
std::vector<std::size_t> boundary_positions(std::string_view text, Symbol boundary = kSpace);

// Throws EvalError when the two sides differ after stripping.
bool exact_match(std::string_view hyp, std::string_view ref, EvalMode mode,
                 Symbol boundary = kSpace);

struct LineVerdict {
  std::string input;
  std::string hypothesis;
  std::string reference;
  bool correct = false;
};

struct EvalReport {
  EvalMode mode = EvalMode::kStrict;
  std::size_t total = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double elapsed_seconds = 0.0;
  std::vector<LineVerdict> per_line;
};

using SegmentFn = std::function<std::string(std::string_view)>;

// Segments each input, judges the top answer against the reference and
// times the whole run. Throws InputError on an empty set and EvalError
// (naming the 1-based pair index) on a content mismatch.
EvalReport evaluate(const SegmentFn& segment, const std::vector<TestPair>& pairs, EvalMode mode,
                    Symbol boundary = kSpace);
// Re-judges an existing report's hypotheses under another mode.
EvalReport rejudge(const EvalReport& report, EvalMode mode, Symbol boundary = kSpace);

struct ReportFormat {
  bool per_line = false;
  bool timing = true;
};

std::string report_json(const EvalReport& report, ReportFormat format = {});
std::string report_human(const EvalReport& report, ReportFormat format = {});

}  // namespace wbseg
