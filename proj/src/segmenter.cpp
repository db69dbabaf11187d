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

#include "wbseg/segmenter.hpp"

#include "wbseg/error.hpp"

namespace wbseg {

SegmenterConfig SegmenterConfig::ngram_defaults() {
  SegmenterConfig c;
  c.threshold = 10.0;
  c.beam_width = 500;
  c.window = Window::unbounded();
  return c;
}

SegmenterConfig SegmenterConfig::rnn_defaults() {
  SegmenterConfig c;
  c.threshold = 8.0;
  c.beam_width = 10;
  c.window = Window(64);
  return c;
}

void SegmenterConfig::validate() const {
  if (!(threshold > 0)) throw ConfigError("threshold t must be positive");
  if (beam_width < 1) throw ConfigError("beam width b must be >= 1");
  if (num_results < 1) throw ConfigError("number of results m must be >= 1");
  if (num_results > beam_width) {
    throw ConfigError("number of results m must not exceed beam width b");
  }
  if (boundary == 0 || boundary > 0x10FFFF) {
    throw ConfigError("boundary must be a single non-null Unicode scalar");
  }
}

namespace {

bool dropped(Symbol s, Symbol boundary, bool lenient) {
  if (s == boundary) return true;
  return lenient && (s == 0 || is_control(s) || is_whitespace(s));
}

}  // namespace

SymbolString strip_boundaries(const SymbolString& text, Symbol boundary, bool lenient) {
  SymbolString out;
  out.reserve(text.size());
  for (Symbol s : text) {
    if (!dropped(s, boundary, lenient)) out.push_back(s);
  }
  return out;
}

std::string strip_boundaries(std::string_view utf8, Symbol boundary, bool lenient) {
  return encode_utf8(strip_boundaries(decode_utf8(utf8), boundary, lenient));
}

SegmenterInput SegmenterInput::prepare(std::string_view text, const Vocabulary& vocab,
                                       const SegmenterConfig& config) {
  const SymbolString symbols = strip_boundaries(decode_utf8(text), config.boundary,
                                                config.lenient);
  SegmenterInput in;
  append_utf8(in.boundary_piece, config.boundary);
  if (vocab.mode() == TokenMode::kCharacter) {
    in.boundary_token = vocab.id(config.boundary);
    for (Symbol s : symbols) {
      in.tokens.push_back(vocab.id(s));
      std::string piece;
      append_utf8(piece, s);
      in.pieces.push_back(std::move(piece));
      in.boundary_ok.push_back(true);
    }
    return in;
  }
  if (config.boundary < 32 || config.boundary > 255 || in.boundary_piece.size() != 1) {
    throw ConfigError("byte models need a single-byte boundary symbol");
  }
  in.boundary_token = vocab.id(config.boundary);
  for (Symbol s : symbols) {
    std::string piece;
    append_utf8(piece, s);
    for (std::size_t k = 0; k < piece.size(); ++k) {
      const auto byte = static_cast<unsigned char>(piece[k]);
      in.tokens.push_back(vocab.id(byte));
      in.pieces.emplace_back(1, piece[k]);
      in.boundary_ok.push_back(k == 0);
    }
  }
  return in;
}

}  // namespace wbseg
