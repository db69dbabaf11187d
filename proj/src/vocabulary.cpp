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

#include "wbseg/vocabulary.hpp"

#include <algorithm>

#include "wbseg/error.hpp"

namespace wbseg {

Vocabulary Vocabulary::characters(std::vector<Symbol> symbols) {
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  Vocabulary v;
  v.mode_ = TokenMode::kCharacter;
  v.symbols_.reserve(symbols.size() + 2);
  v.symbols_.push_back(kReservedBase + kBos);
  v.symbols_.push_back(kReservedBase + kUnk);
  for (Symbol s : symbols) {
    if (s >= kReservedBase) throw InputError("symbol outside the Unicode range");
    v.symbols_.push_back(s);
  }
  for (TokenId id = 0; id < v.symbols_.size(); ++id) v.index_[v.symbols_[id]] = id;
  return v;
}

Vocabulary Vocabulary::bytes() {
  Vocabulary v;
  v.mode_ = TokenMode::kByte;
  v.symbols_.push_back(0);
  for (Symbol b = 32; b < 256; ++b) v.symbols_.push_back(b);
  for (TokenId id = 0; id < v.symbols_.size(); ++id) v.index_[v.symbols_[id]] = id;
  return v;
}

std::optional<TokenId> Vocabulary::unk() const noexcept {
  if (mode_ == TokenMode::kCharacter) return kUnk;
  return std::nullopt;
}

bool Vocabulary::is_reserved(TokenId id) const noexcept {
  return mode_ == TokenMode::kCharacter ? id <= kUnk : id == kPad;
}

bool Vocabulary::is_predictable(TokenId id) const noexcept {
  if (id >= symbols_.size()) return false;
  // The null byte is padding but still a legal event in byte mode.
  return mode_ == TokenMode::kByte || id != kBos;
}

std::optional<TokenId> Vocabulary::find(Symbol symbol) const {
  if (symbol >= kReservedBase) return std::nullopt;
  auto it = index_.find(symbol);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id(Symbol symbol) const {
  if (auto found = find(symbol)) return *found;
  if (mode_ == TokenMode::kCharacter) return kUnk;
  throw InputError("byte " + std::to_string(symbol) + " has no token id");
}

Symbol Vocabulary::symbol(TokenId id) const {
  check(id);
  if (mode_ == TokenMode::kCharacter && id <= kUnk) {
    throw InputError("reserved token " + std::to_string(id) + " has no symbol");
  }
  return symbols_[id];
}

SymbolString Vocabulary::split(std::string_view utf8) const {
  if (mode_ == TokenMode::kCharacter) return decode_utf8(utf8);
  SymbolString out;
  out.reserve(utf8.size());
  for (char c : utf8) {
    const auto b = static_cast<unsigned char>(c);
    if (!is_control(b)) out.push_back(b);
  }
  return out;
}

std::string Vocabulary::join(const SymbolString& symbols) const {
  return mode_ == TokenMode::kCharacter ? encode_utf8(symbols)
                                        : from_bytes(symbols);
}

std::vector<TokenId> Vocabulary::encode(std::span<const Symbol> symbols) const {
  std::vector<TokenId> ids;
  ids.reserve(symbols.size());
  for (Symbol s : symbols) {
    if (mode_ == TokenMode::kByte && is_control(s)) continue;
    ids.push_back(id(s));
  }
  return ids;
}

std::vector<TokenId> Vocabulary::encode(std::string_view utf8) const {
  const SymbolString symbols = split(utf8);
  return encode(symbols);
}

void Vocabulary::check(TokenId id) const {
  if (id >= symbols_.size()) {
    throw InputError("token id " + std::to_string(id) +
                     " outside vocabulary of size " +
                     std::to_string(symbols_.size()));
  }
}

}  // namespace wbseg
