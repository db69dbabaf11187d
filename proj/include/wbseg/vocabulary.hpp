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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wbseg/text.hpp"

namespace wbseg {

using TokenId = std::uint32_t;

enum class TokenMode { kCharacter, kByte };

// Bijection between symbols and dense token ids.
//
// Character mode reserves id 0 for the BOS sentinel and id 1 for UNK; the
// observed symbols follow in code point order. Byte mode keeps the null byte
// (id 0, used both as padding and as the start context) and bytes 32..255;
// values 1..31 have no id.
class Vocabulary {
 public:
  static Vocabulary characters(std::vector<Symbol> symbols);
  static Vocabulary bytes();

  static constexpr TokenId kBos = 0;
  static constexpr TokenId kUnk = 1;
  static constexpr TokenId kPad = 0;
  static constexpr std::size_t kByteVocabSize = 225;

  TokenMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return symbols_.size(); }

  // Context sentinel used to pad short histories: BOS or PAD.
  TokenId start() const noexcept { return 0; }
  std::optional<TokenId> unk() const noexcept;
  bool is_reserved(TokenId id) const noexcept;
  // True when `id` may be the predicted token of an event.
  bool is_predictable(TokenId id) const noexcept;

  std::optional<TokenId> find(Symbol symbol) const;
  // Unknown symbols map to UNK in character mode; throws in byte mode.
  TokenId id(Symbol symbol) const;
  // Reserved ids have no symbol and throw.
  Symbol symbol(TokenId id) const;
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  // Splits text into symbols per the token mode. Byte mode drops 1..31.
  SymbolString split(std::string_view utf8) const;
  std::string join(const SymbolString& symbols) const;
  std::vector<TokenId> encode(std::span<const Symbol> symbols) const;
  std::vector<TokenId> encode(std::string_view utf8) const;

  void check(TokenId id) const;

  bool operator==(const Vocabulary& other) const {
    return mode_ == other.mode_ && symbols_ == other.symbols_;
  }

 private:
  // Placeholder symbols for reserved ids lie outside the Unicode range.
  static constexpr Symbol kReservedBase = 0x110000;

  TokenMode mode_ = TokenMode::kCharacter;
  std::vector<Symbol> symbols_;
  std::unordered_map<Symbol, TokenId> index_;
};

}  // namespace wbseg
