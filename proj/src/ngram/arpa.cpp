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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "wbseg/error.hpp"
#include "wbseg/ngram/model.hpp"
#include "wbseg/text.hpp"

namespace wbseg::ngram {
namespace {

constexpr double kLn10 = 2.302585092994045684;
// Conventional log10 value for context-only entries such as <s>.
constexpr double kArpaNoProb = -99.0;

std::string token_text(const Vocabulary& vocab, TokenId id) {
  if (id == Vocabulary::kBos) return "<s>";
  if (id == Vocabulary::kUnk) return "<unk>";
  const Symbol s = vocab.symbol(id);
  if (s == kSpace) return "<sp>";
  if (s < 0x21 || s == 0x7F || s == 0x85 || s == 0xA0 || is_whitespace(s)) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "<U+%04X>", static_cast<unsigned>(s));
    return buf;
  }
  std::string out;
  append_utf8(out, s);
  return out;
}

std::string format_log10(double ln_value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", ln_value / kLn10);
  return buf;
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_number(std::string_view text, std::size_t line_no) {
  // from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("expected a number, got '" + std::string(text) + "'", line_no);
  }
  return value;
}

// Reserved names map to reserved ids; everything else must decode to one
// symbol.
std::optional<Symbol> parse_symbol(std::string_view text, std::size_t line_no) {
  if (text == "<sp>") return kSpace;
  if (text.size() > 4 && text.substr(0, 3) == "<U+" && text.back() == '>') {
    unsigned value = 0;
    const auto body = text.substr(3, text.size() - 4);
    const auto [ptr, ec] =
        std::from_chars(body.data(), body.data() + body.size(), value, 16);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      throw ParseError("bad escaped symbol '" + std::string(text) + "'", line_no);
    }
    return value;
  }
  const SymbolString s = decode_utf8(text);
  if (s.size() != 1) {
    throw ParseError("gram token '" + std::string(text) +
                         "' is not a single character",
                     line_no);
  }
  return s[0];
}

struct ArpaEntry {
  std::vector<std::string> gram;
  double log10_prob;
  double log10_backoff;
  std::size_t line;
};

std::string_view first_field(std::string_view text, std::size_t line_no) {
  const auto f = fields(text);
  if (f.empty()) throw ParseError("malformed ngram count line", line_no);
  return f[0];
}

}  // namespace

void write_arpa(const NgramModel& model, std::ostream& out) {
  const GramTrie& trie = model.trie();
  const int n = model.order();
  std::vector<std::vector<NodeId>> by_depth(n + 1);
  for (NodeId node = 1; node < trie.size(); ++node) by_depth[trie.depth(node)].push_back(node);

  out << "\\data\\\n";
  for (int k = 1; k <= n; ++k) out << "ngram " << k << '=' << by_depth[k].size() << '\n';
  const Vocabulary& vocab = model.vocabulary();
  for (int k = 1; k <= n; ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (NodeId node : by_depth[k]) {
      if (model.has_prob(node)) {
        out << format_log10(model.node_log_prob(node));
      } else {
        out << kArpaNoProb;
      }
      out << '\t';
      const std::vector<TokenId> gram = trie.gram(node);
      for (std::size_t i = 0; i < gram.size(); ++i) {
        if (i) out << ' ';
        out << token_text(vocab, gram[i]);
      }
      if (k < n) out << '\t' << format_log10(model.node_log_backoff(node));
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
  if (!out) throw Error("failed writing ARPA output");
}

void write_arpa(const NgramModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_arpa(model, out);
}

NgramModel read_arpa(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto is_blank = [&] { return fields(line).empty(); };

  bool found = false;
  while (next_line()) {
    if (line == "\\data\\") {
      found = true;
      break;
    }
  }
  if (!found) throw ParseError("missing \\data\\ header", line_no);

  std::vector<std::size_t> declared;
  while (next_line()) {
    if (is_blank()) {
      if (!declared.empty()) break;
      continue;
    }
    if (line.rfind("ngram ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("malformed ngram count line", line_no);
    const std::string_view view(line);
    const double k = parse_number(first_field(view.substr(6, eq - 6), line_no), line_no);
    const double c = parse_number(first_field(view.substr(eq + 1), line_no), line_no);
    if (k != static_cast<double>(declared.size() + 1)) {
      throw ParseError("ngram counts out of order", line_no);
    }
    declared.push_back(static_cast<std::size_t>(c));
  }
  if (declared.empty()) throw ParseError("no ngram counts in \\data\\", line_no);
  while (declared.size() > 1 && declared.back() == 0) declared.pop_back();
  const int order = static_cast<int>(declared.size());
  if (order > kMaxOrder) throw ParseError("order exceeds the supported maximum", line_no);

  // Entries are kept as text until the vocabulary is known.
  std::vector<std::vector<ArpaEntry>> sections(order + 1);
  bool ended = false;
  int current = 0;
  do {
    if (is_blank()) continue;
    if (line == "\\end\\") {
      ended = true;
      break;
    }
    if (line.front() == '\\') {
      int k = 0;
      const auto dash = line.find("-grams:");
      if (dash == std::string::npos || dash < 2) {
        throw ParseError("malformed section header '" + line + "'", line_no);
      }
      k = static_cast<int>(parse_number(std::string_view(line).substr(1, dash - 1), line_no));
      if (k != current + 1 || k > order) {
        throw ParseError("unexpected section header '" + line + "'", line_no);
      }
      if (current > 0 && sections[current].size() != declared[current - 1]) {
        throw ParseError(std::to_string(current) + "-gram count mismatch: declared " +
                             std::to_string(declared[current - 1]) + ", found " +
                             std::to_string(sections[current].size()),
                         line_no);
      }
      current = k;
      continue;
    }
    if (current == 0) throw ParseError("entry outside any section", line_no);
    const auto f = fields(line);
    const std::size_t k = static_cast<std::size_t>(current);
    if (f.size() != k + 1 && f.size() != k + 2) {
      throw ParseError("expected " + std::to_string(k) + " tokens in entry", line_no);
    }
    const double p = parse_number(f[0], line_no);
    const double bo = f.size() == k + 2 ? parse_number(f[k + 1], line_no) : 0.0;
    std::vector<std::string> gram;
    for (std::size_t i = 1; i <= k; ++i) gram.emplace_back(f[i]);
    sections[current].push_back({std::move(gram), p, bo, line_no});
  } while (next_line());
  if (!ended) throw ParseError("missing \\end\\ marker", line_no + 1);
  if (current != order) throw ParseError("missing n-gram sections", line_no);
  if (sections[current].size() != declared[current - 1]) {
    throw ParseError(std::to_string(current) + "-gram count mismatch: declared " +
                         std::to_string(declared[current - 1]) + ", found " +
                         std::to_string(sections[current].size()),
                     line_no);
  }

  std::vector<Symbol> symbols;
  for (const ArpaEntry& e : sections[1]) {
    const std::string& t = e.gram[0];
    if (t == "<s>" || t == "<unk>" || t == "</s>") continue;
    symbols.push_back(*parse_symbol(t, e.line));
  }
  Vocabulary vocab = Vocabulary::characters(symbols);
  auto to_id = [&](const std::string& t, std::size_t where) -> TokenId {
    if (t == "<s>") return Vocabulary::kBos;
    if (t == "<unk>") return Vocabulary::kUnk;
    const auto id = vocab.find(*parse_symbol(t, where));
    if (!id) throw ParseError("token '" + t + "' missing from the unigrams", where);
    return *id;
  };

  GramTrie trie;
  std::vector<double> log_prob{std::numeric_limits<double>::quiet_NaN()};
  std::vector<double> log_backoff{0.0};
  auto grow = [&](NodeId node) {
    while (log_prob.size() < trie.size()) {
      log_prob.push_back(std::numeric_limits<double>::quiet_NaN());
      log_backoff.push_back(0.0);
    }
    return node;
  };
  bool has_unk = false;
  double min_unigram = 0.0;
  for (int k = 1; k <= order; ++k) {
    for (const ArpaEntry& e : sections[k]) {
      // No end-of-line event is modeled; grams mentioning </s> are skipped.
      if (std::find(e.gram.begin(), e.gram.end(), "</s>") != e.gram.end()) continue;
      NodeId node = GramTrie::kRoot;
      TokenId last = 0;
      for (const auto& t : e.gram) {
        last = to_id(t, e.line);
        node = grow(trie.insert(node, last));
      }
      if (last != Vocabulary::kBos && e.log10_prob > kArpaNoProb) {
        log_prob[node] = e.log10_prob * kLn10;
        if (k == 1) {
          min_unigram = std::min(min_unigram, log_prob[node]);
          has_unk |= last == Vocabulary::kUnk;
        }
      }
      log_backoff[node] = e.log10_backoff * kLn10;
    }
  }
  if (!has_unk) {
    const NodeId node = grow(trie.insert(GramTrie::kRoot, Vocabulary::kUnk));
    log_prob[node] = min_unigram + std::log(0.1);
  }
  return NgramModel(order, std::move(vocab), std::move(trie), std::move(log_prob),
                    std::move(log_backoff));
}

NgramModel read_arpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open ARPA file " + path);
  return read_arpa(in);
}

}  // namespace wbseg::ngram
