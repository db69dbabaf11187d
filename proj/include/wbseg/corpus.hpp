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

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wbseg/text.hpp"

namespace wbseg {

struct PreprocessOptions {
  // Remove <...> markup tags.
  bool strip_sgml = false;
  // Drop lines longer than this many scalars after cleaning; 0 keeps all.
  std::size_t max_chars = 0;
};

// Cleans raw lines into corpus lines:
//   - control symbols (0..31) become spaces
//   - whitespace tokens starting with @<word char> (mentions),
//     #<word char> (hashtags), <letters>:// or www. (URLs) are dropped
//   - whitespace runs collapse to one space; ends are trimmed
//   - lines left empty are dropped
// Idempotent.
std::vector<std::string> preprocess(const std::vector<std::string>& lines,
                                    const PreprocessOptions& options = {});
// The per-line transform; empty when the line would be dropped.
std::string clean_line(std::string_view line, const PreprocessOptions& options = {});

struct SplitSpec {
  std::size_t train_n = 0;
  std::size_t dev_n = 0;
  std::uint64_t seed = 1;
};

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> dev;
};

// Shuffles under the seed; the first train_n lines train, the last dev_n
// lines (of what remains) are held out.
Split shuffle_split(std::vector<std::string> lines, const SplitSpec& spec);

struct TestPair {
  std::string input;      // boundary-free
  std::string reference;  // gold segmentation
};

std::vector<TestPair> make_test_pairs(const std::vector<std::string>& lines,
                                      Symbol boundary = kSpace);

struct CorpusStats {
  std::size_t lines = 0;
  double words = 0;  // per line
  double chars = 0;  // per line
  double bytes = 0;  // per line
  double chars_per_word = 0;
  double bytes_per_char = 0;
};

// Throws InputError on an empty corpus.
CorpusStats corpus_stats(const std::vector<std::string>& lines);
std::string format_stats(const CorpusStats& stats);
std::string stats_json(const CorpusStats& stats);

// One entry per line with '\r' and '\n' removed. Throws LoadError.
std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::vector<std::string>& lines, const std::string& path);

}  // namespace wbseg
