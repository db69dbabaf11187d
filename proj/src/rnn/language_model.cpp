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

#include "wbseg/rnn/language_model.hpp"

#include "wbseg/error.hpp"

namespace wbseg::rnn {

RnnLanguageModel::RnnLanguageModel(RnnModel model, ContextLength context)
    : model_(std::move(model)), context_(context), vocab_(Vocabulary::bytes()) {
  if (context_ && *context_ == 0) throw ConfigError("rnn context length must be >= 1");
  start_.lstm = RnnState<float>::zeros(model_.config);
  feed(start_, Vocabulary::kPad);
}

void RnnLanguageModel::feed(State& state, TokenId token) const {
  auto [next, dist] = forward_step(model_, state.lstm, token);
  state.lstm = std::move(next);
  state.next = std::move(dist.logp);
}

RnnLanguageModel::State RnnLanguageModel::replay(std::span<const TokenId> history) const {
  if (context_ && history.size() > *context_) {
    history = history.last(*context_);
  }
  State state = start_;
  for (TokenId t : history) {
    vocab_.check(t);
    feed(state, t);
  }
  if (context_) state.history.assign(history.begin(), history.end());
  return state;
}

LogProbDist RnnLanguageModel::next_log_probs(std::span<const TokenId> history) const {
  return {replay(history).next};
}

double RnnLanguageModel::advance(State& state, TokenId token) const {
  vocab_.check(token);
  const double lp = state.next.at(token);
  if (!context_) {
    feed(state, token);
    return lp;
  }
  state.history.push_back(token);
  if (state.history.size() > *context_) {
    state = replay(state.history);
  } else {
    feed(state, token);
  }
  return lp;
}

}  // namespace wbseg::rnn
