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

#include "wbseg/ngram/counts.hpp"

#include <algorithm>
#include <unordered_set>

#include "wbseg/error.hpp"
#include "wbseg/text.hpp"

namespace wbseg::ngram {

std::uint64_t NgramCounts::count(std::span<const TokenId> gram) const {
  if (gram.empty() || gram.back() == Vocabulary::kBos) return 0;
  const NodeId node = trie_.find(gram);
  return node == GramTrie::kNone ? 0 : counts_[node];
}

std::map<std::vector<TokenId>, std::uint64_t> NgramCounts::table(int k) const {
  std::map<std::vector<TokenId>, std::uint64_t> out;
  for (NodeId node = 1; node < trie_.size(); ++node) {
    if (static_cast<int>(trie_.depth(node)) == k && is_event(node)) {
      out.emplace(trie_.gram(node), counts_[node]);
    }
  }
  return out;
}

std::size_t NgramCounts::size(int k) const {
  std::size_t n = 0;
  for (NodeId node = 1; node < trie_.size(); ++node) {
    if (static_cast<int>(trie_.depth(node)) == k && is_event(node)) ++n;
  }
  return n;
}

NgramCounts count_ngrams(const Vocabulary& vocab,
                         std::span<const std::vector<TokenId>> lines,
                         int order) {
  if (order < 2 || order > kMaxOrder) {
    throw ConfigError("n-gram order must be in [2, " +
                      std::to_string(kMaxOrder) + "], got " +
                      std::to_string(order));
  }
  if (vocab.mode() != TokenMode::kCharacter) {
    throw ConfigError("n-gram counting expects a character vocabulary");
  }
  NgramCounts c;
  c.order_ = order;
  c.vocab_ = vocab;
  c.counts_.push_back(0);
  c.suffix_.push_back(GramTrie::kNone);

  std::vector<TokenId> padded;
  // Nodes of the walk that started one position to the right, by length.
  std::vector<NodeId> next_walk(order + 1, GramTrie::kRoot);
  std::vector<NodeId> walk(order + 1, GramTrie::kRoot);
  for (const auto& line : lines) {
    padded.assign(order - 1, Vocabulary::kBos);
    for (TokenId t : line) {
      vocab.check(t);
      if (t == Vocabulary::kBos) throw InputError("BOS inside a training line");
      padded.push_back(t);
    }
    // Walking start positions right to left makes the suffix of every new
    // gram the node from the previous walk, one shorter.
    std::fill(next_walk.begin(), next_walk.end(), GramTrie::kRoot);
    for (std::size_t s = padded.size(); s-- > 0;) {
      const std::size_t max_len =
          std::min<std::size_t>(order, padded.size() - s);
      NodeId node = GramTrie::kRoot;
      walk[0] = GramTrie::kRoot;
      for (std::size_t k = 1; k <= max_len; ++k) {
        node = c.trie_.insert(node, padded[s + k - 1]);
        if (node == c.counts_.size()) {
          c.counts_.push_back(0);
          c.suffix_.push_back(k == 1 ? GramTrie::kRoot : next_walk[k - 1]);
        }
        ++c.counts_[node];
        walk[k] = node;
      }
      std::swap(walk, next_walk);
    }
  }
  return c;
}

Vocabulary character_vocabulary(std::span<const std::string> utf8_lines) {
  std::unordered_set<Symbol> seen;
  for (const auto& line : utf8_lines) {
    for (Symbol s : decode_utf8(line)) seen.insert(s);
  }
  return Vocabulary::characters({seen.begin(), seen.end()});
}

NgramCounts count_ngrams(std::span<const std::string> utf8_lines, int order) {
  Vocabulary vocab = character_vocabulary(utf8_lines);
  std::vector<std::vector<TokenId>> lines;
  lines.reserve(utf8_lines.size());
  for (const auto& line : utf8_lines) lines.push_back(vocab.encode(line));
  return count_ngrams(vocab, lines, order);
}

}  // namespace wbseg::ngram
