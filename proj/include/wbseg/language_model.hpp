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

#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wbseg/vocabulary.hpp"

namespace wbseg {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Natural-log distribution over a vocabulary.
struct LogProbDist {
  std::vector<double> logp;

  double operator[](TokenId id) const { return logp[id]; }
  std::size_t size() const noexcept { return logp.size(); }
  double log_sum_exp() const;
  TokenId argmax() const;
};

// Number of trailing tokens averaged by the score; unbounded by default.
class Window {
 public:
  constexpr Window() = default;
  // Throws InputError for 0.
  explicit Window(std::size_t tokens);
  static constexpr Window unbounded() { return Window(); }

  constexpr bool bounded() const noexcept { return tokens_.has_value(); }
  constexpr std::size_t tokens() const noexcept { return tokens_.value_or(0); }
  // Number of terms covered for a sequence of `length` tokens.
  constexpr std::size_t span(std::size_t length) const noexcept {
    return bounded() && *tokens_ < length ? *tokens_ : length;
  }
  constexpr bool operator==(const Window&) const = default;

 private:
  std::optional<std::size_t> tokens_;
};

// History length a model conditions on; nullopt means the full history.
using ContextLength = std::optional<std::size_t>;

// Maps a token history to a distribution over the next token. Histories
// shorter than the context length are treated as padded with the start
// sentinel; an empty history is the start context alone.
//
// Implementations are immutable once built and safe for concurrent queries.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual const Vocabulary& vocabulary() const = 0;
  virtual ContextLength context_length() const = 0;
  // Throws InputError on an id outside the vocabulary.
  virtual LogProbDist next_log_probs(std::span<const TokenId> history) const = 0;

  virtual double log_prob(std::span<const TokenId> history, TokenId token) const;
};

// log P(tokens[k] | tokens[0..k)) for every k, left to right.
std::vector<double> token_log_probs(const LanguageModel& model,
                                    std::span<const TokenId> tokens);

// Mean per-token log-probability. Throws InputError on an empty sequence.
double sequence_score(const LanguageModel& model,
                      std::span<const TokenId> tokens);

// Mean over the last win terms, each conditioned on its full true context.
double windowed_score(const LanguageModel& model,
                      std::span<const TokenId> tokens, Window win);

// Mean of the last `win` entries of per-token terms, summed oldest first.
// Shared by the stateless scorers and the beam so both agree bit for bit.
double mean_of_window(std::span<const double> terms, Window win);

// Left-to-right scoring with a carried state. The segmenter is written
// against this; advance() must return exactly next_log_probs(history)[token]
// for the history the state summarizes.
template <class M>
concept IncrementalModel = requires(const M& model, typename M::State& state,
                                    TokenId token) {
  typename M::State;
  { model.vocabulary() } -> std::convertible_to<const Vocabulary&>;
  { model.start_state() } -> std::same_as<typename M::State>;
  { model.advance(state, token) } -> std::same_as<double>;
};

// Gives any LanguageModel the incremental surface by carrying the raw
// history. Slow; meant for stubs and reference checks.
class HistoryScorer {
 public:
  struct State {
    std::vector<TokenId> history;
  };

  explicit HistoryScorer(const LanguageModel& model) : model_(&model) {}

  const Vocabulary& vocabulary() const { return model_->vocabulary(); }
  State start_state() const { return {}; }
  double advance(State& state, TokenId token) const;

 private:
  const LanguageModel* model_;
};

}  // namespace wbseg
