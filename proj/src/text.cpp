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

#include "wbseg/text.hpp"

#include <unicode/uchar.h>

namespace wbseg {

SymbolString decode_utf8(std::string_view text) {
  SymbolString out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto lead = static_cast<unsigned char>(text[i]);
    int extra;
    char32_t cp;
    if (lead < 0x80) {
      out.push_back(lead);
      ++i;
      continue;
    } else if ((lead & 0xE0) == 0xC0) {
      extra = 1;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3;
      cp = lead & 0x07;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + extra >= n) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

void append_utf8(std::string& out, Symbol cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const SymbolString& symbols) {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) append_utf8(out, s);
  return out;
}

SymbolString to_bytes(std::string_view text) {
  SymbolString out;
  out.reserve(text.size());
  for (char c : text) out.push_back(static_cast<unsigned char>(c));
  return out;
}

std::string from_bytes(const SymbolString& bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (Symbol b : bytes) out.push_back(static_cast<char>(b));
  return out;
}

bool is_alnum(Symbol s) {
  return s <= 0x10FFFF && u_isalnum(static_cast<UChar32>(s));
}

bool is_whitespace(Symbol s) {
  return s <= 0x10FFFF && u_isUWhiteSpace(static_cast<UChar32>(s));
}

bool is_word_char(Symbol s) {
  if (s > 0x10FFFF) return false;
  if (s == U'_') return true;
  const auto c = static_cast<UChar32>(s);
  return u_isalnum(c) || u_hasBinaryProperty(c, UCHAR_GRAPHEME_EXTEND) ||
         u_charType(c) == U_CONNECTOR_PUNCTUATION;
}

bool is_control(Symbol s) { return s >= 1 && s <= 31; }

std::size_t count_scalars(std::string_view utf8) {
  return decode_utf8(utf8).size();
}

}  // namespace wbseg
