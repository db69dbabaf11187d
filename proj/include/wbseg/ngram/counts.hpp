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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wbseg/ngram/gram_trie.hpp"
#include "wbseg/vocabulary.hpp"

namespace wbseg::ngram {

inline constexpr int kMaxOrder = 16;

// Exact k-gram counts for k = 1..order over BOS-padded lines.
//
// Each line is prefixed with order-1 BOS sentinels. Grams that end in BOS
// are kept in the trie as contexts only; they are never events, so
// table(k) and count() skip them.
class NgramCounts {
 public:
  int order() const noexcept { return order_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const GramTrie& trie() const noexcept { return trie_; }

  // 0 for grams never seen.
  std::uint64_t count(std::span<const TokenId> gram) const;
  std::map<std::vector<TokenId>, std::uint64_t> table(int k) const;
  std::size_t size(int k) const;
  bool empty() const { return size(1) == 0; }

  // Raw access for estimation, indexed by trie node.
  std::uint64_t raw_count(NodeId node) const { return counts_[node]; }
  // Node for the gram with its first token dropped; the root for unigrams.
  NodeId suffix(NodeId node) const { return suffix_[node]; }
  bool is_event(NodeId node) const {
    return node != GramTrie::kRoot && trie_.token(node) != Vocabulary::kBos;
  }

 private:
  friend NgramCounts count_ngrams(const Vocabulary&,
                                  std::span<const std::vector<TokenId>>, int);

  int order_ = 0;
  Vocabulary vocab_;
  GramTrie trie_;
  std::vector<std::uint64_t> counts_;
  std::vector<NodeId> suffix_;
};

// Throws ConfigError when order is outside [2, kMaxOrder].
NgramCounts count_ngrams(const Vocabulary& vocab,
                         std::span<const std::vector<TokenId>> lines,
                         int order);

// Builds a character vocabulary from the lines, then counts.
NgramCounts count_ngrams(std::span<const std::string> utf8_lines, int order);

Vocabulary character_vocabulary(std::span<const std::string> utf8_lines);

}  // namespace wbseg::ngram
