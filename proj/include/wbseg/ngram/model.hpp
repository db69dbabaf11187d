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

#include <array>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "wbseg/language_model.hpp"
#include "wbseg/ngram/counts.hpp"
#include "wbseg/ngram/gram_trie.hpp"

namespace wbseg::ngram {

// Per-order count thresholds; grams with a raw count below min_count(k) are
// dropped unless they prefix a surviving higher-order gram.
class PruneConfig {
 public:
  PruneConfig() = default;
  // thresholds[k-1] applies to order k. Throws ConfigError unless the
  // unigram threshold is 1 (or absent) and every threshold is >= 1.
  explicit PruneConfig(std::vector<std::uint64_t> thresholds);
  // Threshold `value` for every order >= `from_order`.
  static PruneConfig from_order(int from_order, std::uint64_t value);

  std::uint64_t min_count(int k) const;

 private:
  std::vector<std::uint64_t> thresholds_;
};

struct KnParams {
  // Indexed by order - 1.
  std::vector<double> discounts;
  std::vector<std::uint64_t> n1;
  std::vector<std::uint64_t> n2;
};

// Clamped single discount n1 / (n1 + 2 n2).
double kn_discount(std::uint64_t n1, std::uint64_t n2);

// Character backoff model. Each stored gram carries its interpolated
// log-probability and, as a context, its log backoff weight (natural log).
class NgramModel final : public LanguageModel {
 public:
  // Suffix nodes of the history: context[j] is the node of the last j
  // tokens, or kNone when that gram is not stored. context[0] is the root.
  struct State {
    std::array<NodeId, kMaxOrder> context;
  };

  // Assembled by estimate_kn() and read_arpa().
  NgramModel(int order, Vocabulary vocab, GramTrie trie,
             std::vector<double> log_prob, std::vector<double> log_backoff,
             KnParams params = {});

  int order() const noexcept { return order_; }
  const Vocabulary& vocabulary() const override { return vocab_; }
  ContextLength context_length() const override {
    return static_cast<std::size_t>(order_ > 1 ? order_ - 1 : 1);
  }
  LogProbDist next_log_probs(std::span<const TokenId> history) const override;
  double log_prob(std::span<const TokenId> history,
                  TokenId token) const override;

  State start_state() const;
  // log P(token | state), then moves the state past token.
  double advance(State& state, TokenId token) const;
  State state_for(std::span<const TokenId> history) const;

  // Number of stored events (grams with a probability) of order k.
  std::size_t num_entries(int k) const;
  std::size_t num_entries() const;
  double unk_log_prob() const;
  const KnParams& kn_params() const noexcept { return params_; }

  const GramTrie& trie() const noexcept { return trie_; }
  // NaN marks context-only nodes.
  double node_log_prob(NodeId node) const { return log_prob_[node]; }
  double node_log_backoff(NodeId node) const { return log_backoff_[node]; }
  bool has_prob(NodeId node) const { return !std::isnan(log_prob_[node]); }

 private:
  double score(const State& state, TokenId token) const;

  int order_;
  Vocabulary vocab_;
  GramTrie trie_;
  std::vector<double> log_prob_;
  std::vector<double> log_backoff_;
  KnParams params_;
  State start_;
};

// Interpolated Kneser-Ney with one discount per order. The highest order
// uses raw counts, lower orders continuation counts. UNK receives a tenth of
// the smallest unigram probability; the other unigrams are scaled to keep
// every distribution normalized. Throws TrainingError when an order has no
// events.
NgramModel estimate_kn(const NgramCounts& counts, const PruneConfig& prune = {});

// ARPA text with base-10 log values. Spaces are written as <sp>.
void write_arpa(const NgramModel& model, std::ostream& out);
void write_arpa(const NgramModel& model, const std::string& path);
// Throws ParseError carrying the offending line number.
NgramModel read_arpa(std::istream& in);
NgramModel read_arpa(const std::string& path);

}  // namespace wbseg::ngram
