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

#include "wbseg/ngram/gram_trie.hpp"

#include <algorithm>

namespace wbseg::ngram {

GramTrie::GramTrie() {
  parent_.push_back(kNone);
  token_.push_back(0);
  depth_.push_back(0);
}

NodeId GramTrie::insert(NodeId parent, TokenId token) {
  auto [it, inserted] =
      children_.try_emplace(key(parent, token), static_cast<NodeId>(size()));
  if (inserted) {
    parent_.push_back(parent);
    token_.push_back(token);
    depth_.push_back(static_cast<std::uint8_t>(depth_[parent] + 1));
  }
  return it->second;
}

NodeId GramTrie::find(std::span<const TokenId> gram) const {
  NodeId node = kRoot;
  for (TokenId t : gram) {
    node = child(node, t);
    if (node == kNone) break;
  }
  return node;
}

std::vector<TokenId> GramTrie::gram(NodeId node) const {
  std::vector<TokenId> out;
  for (; node != kRoot; node = parent_[node]) out.push_back(token_[node]);
  std::reverse(out.begin(), out.end());
  return out;
}

void GramTrie::reserve(std::size_t nodes) {
  parent_.reserve(nodes);
  token_.reserve(nodes);
  depth_.reserve(nodes);
  children_.reserve(nodes);
}

}  // namespace wbseg::ngram
