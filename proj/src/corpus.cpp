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

#include "wbseg/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wbseg/error.hpp"
#include "wbseg/segmenter.hpp"

namespace wbseg {
namespace {

bool is_ascii_letter(Symbol s) { return (s >= U'a' && s <= U'z') || (s >= U'A' && s <= U'Z'); }

bool is_artifact(const SymbolString& token) {
  if (token.size() >= 2 && (token[0] == U'@' || token[0] == U'#') && is_word_char(token[1])) {
    return true;
  }
  std::size_t i = 0;
  while (i < token.size() && is_ascii_letter(token[i])) ++i;
  if (i > 0 && i + 3 <= token.size() && token[i] == U':' && token[i + 1] == U'/' &&
      token[i + 2] == U'/') {
    return true;
  }
  static const SymbolString kWww = {U'w', U'w', U'w', U'.'};
  return token.size() >= kWww.size() && std::equal(kWww.begin(), kWww.end(), token.begin());
}

SymbolString remove_tags(const SymbolString& s) {
  SymbolString out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == U'<' && i + 1 < s.size() &&
        (is_ascii_letter(s[i + 1]) || s[i + 1] == U'/' || s[i + 1] == U'!' ||
         s[i + 1] == U'?')) {
      const auto close = std::find(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(), U'>');
      if (close != s.end()) {
        out.push_back(kSpace);
        i = static_cast<std::size_t>(close - s.begin());
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

}  // namespace

std::string clean_line(std::string_view line, const PreprocessOptions& options) {
  SymbolString s = decode_utf8(line);
  for (Symbol& c : s) {
    if (c == 0 || is_control(c)) c = kSpace;
  }
  if (options.strip_sgml) s = remove_tags(s);
  SymbolString out;
  SymbolString token;
  auto flush = [&] {
    if (!token.empty() && !is_artifact(token)) {
      if (!out.empty()) out.push_back(kSpace);
      out.insert(out.end(), token.begin(), token.end());
    }
    token.clear();
  };
  for (Symbol c : s) {
    if (is_whitespace(c)) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  if (options.max_chars > 0 && out.size() > options.max_chars) return {};
  return encode_utf8(out);
}

std::vector<std::string> preprocess(const std::vector<std::string>& lines,
                                    const PreprocessOptions& options) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const auto& line : lines) {
    std::string c = clean_line(line, options);
    if (!c.empty()) out.push_back(std::move(c));
  }
  return out;
}

Split shuffle_split(std::vector<std::string> lines, const SplitSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::shuffle(lines.begin(), lines.end(), rng);
  Split split;
  const std::size_t train = std::min(spec.train_n, lines.size());
  const std::size_t dev = std::min(spec.dev_n, lines.size() - train);
  split.train.assign(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(train));
  split.dev.assign(lines.end() - static_cast<std::ptrdiff_t>(dev), lines.end());
  return split;
}

std::vector<TestPair> make_test_pairs(const std::vector<std::string>& lines, Symbol boundary) {
  std::vector<TestPair> pairs;
  pairs.reserve(lines.size());
  for (const auto& line : lines) pairs.push_back({strip_boundaries(line, boundary), line});
  return pairs;
}

CorpusStats corpus_stats(const std::vector<std::string>& lines) {
  if (lines.empty()) throw InputError("corpus statistics need at least one line");
  std::size_t words = 0, chars = 0, bytes = 0;
  for (const auto& line : lines) {
    const SymbolString s = decode_utf8(line);
    bool in_word = false;
    for (Symbol c : s) {
      const bool ws = is_whitespace(c);
      if (!ws && !in_word) ++words;
      in_word = !ws;
    }
    chars += s.size();
    bytes += line.size();
  }
  CorpusStats st;
  const auto n = static_cast<double>(lines.size());
  st.lines = lines.size();
  st.words = static_cast<double>(words) / n;
  st.chars = static_cast<double>(chars) / n;
  st.bytes = static_cast<double>(bytes) / n;
  st.chars_per_word = words ? st.chars / st.words : 0.0;
  st.bytes_per_char = chars ? st.bytes / st.chars : 0.0;
  return st;
}

std::string format_stats(const CorpusStats& s) {
  return fmt::format(
      "lines  words   chars   bytes   chars/word  bytes/char\n"
      "{:<6} {:<7.2f} {:<7.2f} {:<7.2f} {:<11.2f} {:.2f}\n",
      s.lines, s.words, s.chars, s.bytes, s.chars_per_word, s.bytes_per_char);
}

std::string stats_json(const CorpusStats& s) {
  nlohmann::json j = {{"lines", s.lines},
                      {"words", s.words},
                      {"chars", s.chars},
                      {"bytes", s.bytes},
                      {"chars_per_word", s.chars_per_word},
                      {"bytes_per_char", s.bytes_per_char}};
  return j.dump();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_lines(const std::vector<std::string>& lines, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw Error("failed writing " + path);
}

}  // namespace wbseg
