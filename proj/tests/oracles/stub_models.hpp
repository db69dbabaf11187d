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

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "wbseg/language_model.hpp"

namespace wbseg::testing {

// Uniform over every vocabulary entry.
class UniformModel final : public LanguageModel {
 public:
  explicit UniformModel(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  const Vocabulary& vocabulary() const override { return vocab_; }
  ContextLength context_length() const override { return 1; }
  LogProbDist next_log_probs(std::span<const TokenId> history) const override {
    for (TokenId t : history) vocab_.check(t);
    return {std::vector<double>(vocab_.size(),
                                -std::log(static_cast<double>(vocab_.size())))};
  }

 private:
  Vocabulary vocab_;
};

// Maximum-likelihood bigram from raw counts over BOS-padded lines. Contexts
// never seen fall back to uniform over the predictable ids.
class RawBigramModel final : public LanguageModel {
 public:
  RawBigramModel(Vocabulary vocab, const std::vector<std::string>& lines)
      : vocab_(std::move(vocab)) {
    for (const auto& line : lines) {
      TokenId prev = vocab_.start();
      for (TokenId t : vocab_.encode(line)) {
        ++counts_[prev][t];
        prev = t;
      }
    }
  }
  const Vocabulary& vocabulary() const override { return vocab_; }
  ContextLength context_length() const override { return 1; }
  LogProbDist next_log_probs(std::span<const TokenId> history) const override {
    for (TokenId t : history) vocab_.check(t);
    const TokenId prev = history.empty() ? vocab_.start() : history.back();
    LogProbDist d{std::vector<double>(vocab_.size(), kNegInf)};
    auto it = counts_.find(prev);
    if (it == counts_.end()) {
      std::size_t n = 0;
      for (TokenId id = 0; id < vocab_.size(); ++id) n += vocab_.is_predictable(id);
      for (TokenId id = 0; id < vocab_.size(); ++id) {
        if (vocab_.is_predictable(id)) d.logp[id] = -std::log(static_cast<double>(n));
      }
      return d;
    }
    double total = 0;
    for (const auto& [t, c] : it->second) total += c;
    for (const auto& [t, c] : it->second) d.logp[t] = std::log(c / total);
    return d;
  }

 private:
  Vocabulary vocab_;
  std::map<TokenId, std::map<TokenId, double>> counts_;
};

}  // namespace wbseg::testing
