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

#include <string>
#include <string_view>
#include <vector>

namespace wbseg {

// A symbol is a Unicode scalar value in character mode and a byte value in
// byte mode.
using Symbol = char32_t;
using SymbolString = std::vector<Symbol>;

inline constexpr Symbol kSpace = U' ';

// Lenient decoding: malformed sequences decode to U+FFFD.
SymbolString decode_utf8(std::string_view text);
std::string encode_utf8(const SymbolString& symbols);
void append_utf8(std::string& out, Symbol symbol);

SymbolString to_bytes(std::string_view text);
std::string from_bytes(const SymbolString& bytes);

bool is_alnum(Symbol symbol);
bool is_whitespace(Symbol symbol);
// \w in the regex sense: letters, digits, marks and underscore.
bool is_word_char(Symbol symbol);
// Nonprintable values 1..31.
bool is_control(Symbol symbol);

std::size_t count_scalars(std::string_view utf8);

}  // namespace wbseg
