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
#include <limits>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "wbseg/vocabulary.hpp"

namespace wbseg::ngram {

using NodeId = std::uint32_t;

// Prefix trie over token sequences. Every node is a stored gram; the root is
// the empty gram. Children are found through one hash table keyed on
// (parent, token), so a lookup costs one probe regardless of table size.
class GramTrie {
 public:
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

  GramTrie();

  NodeId child(NodeId parent, TokenId token) const {
    if (parent == kNone) return kNone;
    auto it = children_.find(key(parent, token));
    return it == children_.end() ? kNone : it->second;
  }
  // Returns the existing child or a new node.
  NodeId insert(NodeId parent, TokenId token);
  // kNone when any prefix of `gram` is absent.
  NodeId find(std::span<const TokenId> gram) const;

  std::size_t size() const noexcept { return parent_.size(); }
  NodeId parent(NodeId node) const { return parent_[node]; }
  TokenId token(NodeId node) const { return token_[node]; }
  unsigned depth(NodeId node) const { return depth_[node]; }
  std::vector<TokenId> gram(NodeId node) const;

  void reserve(std::size_t nodes);

 private:
  static std::uint64_t key(NodeId parent, TokenId token) {
    return (std::uint64_t{parent} << 32) | token;
  }

  std::vector<NodeId> parent_;
  std::vector<TokenId> token_;
  std::vector<std::uint8_t> depth_;
  absl::flat_hash_map<std::uint64_t, NodeId> children_;
};

}  // namespace wbseg::ngram
