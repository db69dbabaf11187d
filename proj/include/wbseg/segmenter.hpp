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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wbseg/language_model.hpp"
#include "wbseg/text.hpp"
#include "wbseg/vocabulary.hpp"

namespace wbseg {

struct SegmenterConfig {
  // Bound on the mean negative log-probability (natural log) of a candidate
  // that just received a boundary; +inf accepts every boundary.
  double threshold = 10.0;
  std::size_t beam_width = 500;
  std::size_t num_results = 1;
  Symbol boundary = kSpace;
  Window window = Window::unbounded();
  // Also strip every whitespace and control symbol from the input, not just
  // the boundary symbol.
  bool lenient = true;

  static constexpr double kAcceptAll = std::numeric_limits<double>::infinity();

  // Tuned operating points of the two backends.
  static SegmenterConfig ngram_defaults();
  static SegmenterConfig rnn_defaults();

  // Throws ConfigError unless t > 0, b >= 1, 1 <= m <= b.
  void validate() const;
};

// Removes the boundary symbol (and, when lenient, whitespace and control
// symbols). Idempotent.
SymbolString strip_boundaries(const SymbolString& text, Symbol boundary, bool lenient = true);
std::string strip_boundaries(std::string_view utf8, Symbol boundary, bool lenient = true);

struct Segmentation {
  std::string text;
  double score = 0.0;
};

// The stripped input cut into model tokens. Byte mode forbids boundaries in
// front of UTF-8 continuation bytes.
struct SegmenterInput {
  std::vector<TokenId> tokens;
  std::vector<std::string> pieces;
  std::vector<bool> boundary_ok;
  TokenId boundary_token = 0;
  std::string boundary_piece;

  static SegmenterInput prepare(std::string_view text, const Vocabulary& vocab,
                                const SegmenterConfig& config);
  std::size_t size() const noexcept { return tokens.size(); }
};

// One decoding pass over a line. Candidates share token history through an
// arena of parent-linked nodes; each carries the model state needed to score
// its next token.
template <IncrementalModel M>
class BeamSearch {
 public:
  struct Candidate {
    typename M::State state;
    double sum = 0.0;    // sum of every token's log-probability
    double score = 0.0;  // windowed mean, the ranking key
    std::uint32_t node = kNoNode;
    std::uint32_t length = 0;      // tokens including boundaries
    std::uint32_t boundaries = 0;  // inserted boundary count
    std::uint32_t last_boundary = 0;  // input index after the last boundary
  };
  using Beam = std::vector<Candidate>;

  BeamSearch(const M& model, const SegmenterConfig& config, std::string_view text)
      : model_(model),
        config_(config),
        input_(SegmenterInput::prepare(text, model.vocabulary(), config)) {
    config_.validate();
  }

  const SegmenterInput& input() const noexcept { return input_; }

  // The beam after the first input token.
  Beam bootstrap() {
    Candidate c{model_.start_state()};
    return {extend(c, 0)};
  }

  // cand followed by input token `pos`.
  Candidate extend(const Candidate& cand, std::size_t pos) {
    Candidate next = cand;
    push(next, input_.tokens[pos], static_cast<std::uint32_t>(pos), false);
    next.score = windowed(next);
    return next;
  }

  // cand + boundary + input token `pos` if its windowed score clears the
  // threshold.
  std::optional<Candidate> bnd(const Candidate& cand, std::size_t pos) {
    if (!input_.boundary_ok[pos]) return std::nullopt;
    Candidate next = cand;
    push(next, input_.boundary_token, static_cast<std::uint32_t>(pos), true);
    push(next, input_.tokens[pos], static_cast<std::uint32_t>(pos), false);
    next.boundaries += 1;
    next.last_boundary = static_cast<std::uint32_t>(pos);
    next.score = windowed(next);
    if (!accepts(next.score)) return std::nullopt;
    return next;
  }

  bool accepts(double score) const {
    return std::isinf(config_.threshold) || score > -config_.threshold;
  }

  Beam xpd(const Beam& beam, std::size_t pos) {
    Beam out;
    out.reserve(2 * beam.size());
    for (const Candidate& c : beam) {
      out.push_back(extend(c, pos));
      if (auto b = bnd(c, pos)) out.push_back(std::move(*b));
    }
    return out;
  }

  // Best-first order: score, fewer boundaries, earlier last boundary, then
  // the ascending boundary positions compared lexicographically.
  bool better(const Candidate& a, const Candidate& b) const {
    if (a.score != b.score) return a.score > b.score;
    if (a.boundaries != b.boundaries) return a.boundaries < b.boundaries;
    if (a.last_boundary != b.last_boundary) return a.last_boundary < b.last_boundary;
    const auto pa = boundary_positions(a);
    const auto pb = boundary_positions(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  }

  Beam top_n(Beam cands, std::size_t n) const {
    auto cmp = [this](const Candidate& a, const Candidate& b) { return better(a, b); };
    if (n < cands.size()) {
      std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(n),
                        cands.end(), cmp);
      cands.resize(n);
    } else {
      std::sort(cands.begin(), cands.end(), cmp);
    }
    return cands;
  }

  Beam beam_step(const Beam& beam, std::size_t pos) {
    return top_n(xpd(beam, pos), config_.beam_width);
  }

  // The full decode: bootstrap, fold beam_step, keep the m best.
  std::vector<Segmentation> run() {
    if (input_.size() == 0) return {Segmentation{}};
    Beam beam = bootstrap();
    for (std::size_t pos = 1; pos < input_.size(); ++pos) beam = beam_step(beam, pos);
    beam = top_n(std::move(beam), config_.num_results);
    std::vector<Segmentation> out;
    out.reserve(beam.size());
    for (const Candidate& c : beam) out.push_back({render(c), c.score});
    return out;
  }

  // Input indices that are preceded by a boundary, ascending.
  std::vector<std::uint32_t> boundary_positions(const Candidate& c) const {
    std::vector<std::uint32_t> out;
    out.reserve(c.boundaries);
    for (std::uint32_t n = c.node; n != kNoNode; n = arena_[n].parent) {
      if (arena_[n].boundary) out.push_back(arena_[n].position);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Every token of the candidate, boundaries included, oldest first.
  std::vector<TokenId> tokens(const Candidate& c) const {
    std::vector<TokenId> out;
    for (std::uint32_t n = c.node; n != kNoNode; n = arena_[n].parent) {
      out.push_back(arena_[n].boundary ? input_.boundary_token
                                       : input_.tokens[arena_[n].position]);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::string render(const Candidate& c) const {
    std::vector<const std::string*> parts;
    for (std::uint32_t n = c.node; n != kNoNode; n = arena_[n].parent) {
      parts.push_back(arena_[n].boundary ? &input_.boundary_piece
                                         : &input_.pieces[arena_[n].position]);
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) out += **it;
    return out;
  }

 private:
  static constexpr std::uint32_t kNoNode = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t parent;
    std::uint32_t position;
    bool boundary;
    double term;
  };

  void push(Candidate& c, TokenId token, std::uint32_t position, bool boundary) {
    const double term = model_.advance(c.state, token);
    arena_.push_back({c.node, position, boundary, term});
    c.node = static_cast<std::uint32_t>(arena_.size() - 1);
    c.sum += term;
    c.length += 1;
  }

  // Same arithmetic as mean_of_window: the window's terms summed oldest
  // first, divided by their count.
  double windowed(const Candidate& c) {
    const std::size_t n = config_.window.span(c.length);
    if (n == c.length) return c.sum / static_cast<double>(n);
    scratch_.clear();
    std::uint32_t node = c.node;
    for (std::size_t k = 0; k < n; ++k, node = arena_[node].parent) {
      scratch_.push_back(arena_[node].term);
    }
    double sum = 0.0;
    for (auto it = scratch_.rbegin(); it != scratch_.rend(); ++it) sum += *it;
    return sum / static_cast<double>(n);
  }

  const M& model_;
  SegmenterConfig config_;
  SegmenterInput input_;
  std::vector<Node> arena_;
  std::vector<double> scratch_;
};

template <IncrementalModel M>
std::vector<Segmentation> segment_line(std::string_view text, const M& model,
                                       const SegmenterConfig& config) {
  return BeamSearch<M>(model, config, text).run();
}

}  // namespace wbseg
