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

#include <memory>
#include <vector>

#include "wbseg/language_model.hpp"
#include "wbseg/rnn/model.hpp"

namespace wbseg::rnn {

// The recurrent model behind the LanguageModel contract. With an unbounded
// context (the default) the carried state sees the whole history; with a
// bounded one every query replays the last `context` tokens from a fresh
// state, matching the stateless definition.
class RnnLanguageModel final : public LanguageModel {
 public:
  struct State {
    RnnState<float> lstm;
    // Distribution over the token after the consumed history.
    std::vector<double> next;
    // Only kept when the context is bounded.
    std::vector<TokenId> history;
  };

  explicit RnnLanguageModel(RnnModel model, ContextLength context = std::nullopt);

  const Vocabulary& vocabulary() const override { return vocab_; }
  ContextLength context_length() const override { return context_; }
  LogProbDist next_log_probs(std::span<const TokenId> history) const override;

  State start_state() const { return start_; }
  double advance(State& state, TokenId token) const;

  const RnnModel& model() const noexcept { return model_; }

 private:
  State replay(std::span<const TokenId> history) const;
  void feed(State& state, TokenId token) const;

  RnnModel model_;
  ContextLength context_;
  Vocabulary vocab_;
  State start_;
};

}  // namespace wbseg::rnn
