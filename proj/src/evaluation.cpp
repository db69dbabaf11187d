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

#include "wbseg/evaluation.hpp"

#include <chrono>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wbseg/error.hpp"
#include "wbseg/segmenter.hpp"

namespace wbseg {
namespace {

bool separates(Symbol s, Symbol boundary) { return s == boundary || s == 0 || is_control(s) || is_whitespace(s); }

struct Analysed {
  SymbolString stripped;
  std::vector<std::size_t> cuts;
};

Analysed analyse(std::string_view text, Symbol boundary) {
  Analysed a;
  bool pending = false;
  for (Symbol s : decode_utf8(text)) {
    if (separates(s, boundary)) {
      pending = !a.stripped.empty();
      continue;
    }
    if (pending) a.cuts.push_back(a.stripped.size());
    pending = false;
    a.stripped.push_back(s);
  }
  return a;
}

std::vector<std::size_t> alnum_only(const Analysed& a) {
  std::vector<std::size_t> out;
  for (std::size_t i : a.cuts) {
    if (is_alnum(a.stripped[i - 1]) && is_alnum(a.stripped[i])) out.push_back(i);
  }
  return out;
}

bool judge(std::string_view hyp, std::string_view ref, EvalMode mode, Symbol boundary) {
  const Analysed h = analyse(hyp, boundary);
  const Analysed r = analyse(ref, boundary);
  if (h.stripped != r.stripped) {
    throw EvalError("hypothesis \"" + std::string(hyp) + "\" and reference \"" +
                    std::string(ref) + "\" differ beyond boundaries");
  }
  if (mode == EvalMode::kStrict) return h.cuts == r.cuts;
  return alnum_only(h) == alnum_only(r);
}

void finish(EvalReport& r) {
  r.total = r.per_line.size();
  r.correct = 0;
  for (const auto& l : r.per_line) r.correct += l.correct;
  r.precision = static_cast<double>(r.correct) / static_cast<double>(r.total);
}

}  // namespace

std::string_view to_string(EvalMode mode) {
  return mode == EvalMode::kStrict ? "strict" : "alnum";
}

EvalMode parse_eval_mode(std::string_view name) {
  if (name == "strict") return EvalMode::kStrict;
  if (name == "alnum") return EvalMode::kAlnum;
  throw ConfigError("unknown evaluation mode '" + std::string(name) + "' (strict|alnum)");
}

std::vector<std::size_t> boundary_positions(std::string_view text, Symbol boundary) {
  return analyse(text, boundary).cuts;
}

bool exact_match(std::string_view hyp, std::string_view ref, EvalMode mode, Symbol boundary) {
  return judge(hyp, ref, mode, boundary);
}

EvalReport evaluate(const SegmentFn& segment, const std::vector<TestPair>& pairs, EvalMode mode,
                    Symbol boundary) {
  if (pairs.empty()) throw InputError("evaluation needs at least one test pair");
  EvalReport r;
  r.mode = mode;
  r.per_line.reserve(pairs.size());
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    LineVerdict v{pairs[k].input, segment(pairs[k].input), pairs[k].reference, false};
    try {
      v.correct = judge(v.hypothesis, v.reference, mode, boundary);
    } catch (const EvalError& e) {
      throw EvalError("pair " + std::to_string(k + 1) + ": " + e.what());
    }
    r.per_line.push_back(std::move(v));
  }
  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  finish(r);
  return r;
}

EvalReport rejudge(const EvalReport& report, EvalMode mode, Symbol boundary) {
  EvalReport r = report;
  r.mode = mode;
  for (auto& l : r.per_line) l.correct = judge(l.hypothesis, l.reference, mode, boundary);
  finish(r);
  return r;
}

std::string report_json(const EvalReport& r, ReportFormat format) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["total"] = r.total;
  j["correct"] = r.correct;
  j["precision"] = r.precision;
  if (format.timing) j["elapsed_seconds"] = r.elapsed_seconds;
  if (format.per_line) {
    auto& lines = j["lines"] = nlohmann::ordered_json::array();
    for (const auto& l : r.per_line) {
      lines.push_back({{"input", l.input},
                       {"hypothesis", l.hypothesis},
                       {"reference", l.reference},
                       {"correct", l.correct}});
    }
  }
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string report_human(const EvalReport& r, ReportFormat format) {
  std::string out = fmt::format("mode       {}\ntotal      {}\ncorrect    {}\nprecision  {:.4f}\n",
                                to_string(r.mode), r.total, r.correct, r.precision);
  if (format.timing) out += fmt::format("elapsed    {:.3f} s\n", r.elapsed_seconds);
  if (format.per_line) {
    out += "\nverdict  hypothesis | reference\n";
    for (const auto& l : r.per_line) {
      out += fmt::format("{:<8} {} | {}\n", l.correct ? "ok" : "WRONG", l.hypothesis,
                         l.reference);
    }
  }
  return out;
}

}  // namespace wbseg
