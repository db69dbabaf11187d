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

#include "wbseg/language_model.hpp"

#include <algorithm>
#include <cmath>

#include "wbseg/error.hpp"

namespace wbseg {

double LogProbDist::log_sum_exp() const {
  double hi = kNegInf;
  for (double v : logp) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : logp) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

TokenId LogProbDist::argmax() const {
  return static_cast<TokenId>(std::max_element(logp.begin(), logp.end()) -
                              logp.begin());
}

Window::Window(std::size_t tokens) : tokens_(tokens) {
  if (tokens == 0) throw InputError("window must cover at least one token");
}

double LanguageModel::log_prob(std::span<const TokenId> history,
                               TokenId token) const {
  vocabulary().check(token);
  return next_log_probs(history)[token];
}

std::vector<double> token_log_probs(const LanguageModel& model,
                                    std::span<const TokenId> tokens) {
  const ContextLength rho = model.context_length();
  std::vector<double> terms;
  terms.reserve(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    std::size_t begin = 0;
    if (rho && k > *rho) begin = k - *rho;
    terms.push_back(model.log_prob(tokens.subspan(begin, k - begin), tokens[k]));
  }
  return terms;
}

double mean_of_window(std::span<const double> terms, Window win) {
  const std::size_t n = win.span(terms.size());
  double sum = 0.0;
  for (std::size_t k = terms.size() - n; k < terms.size(); ++k) sum += terms[k];
  return sum / static_cast<double>(n);
}

double sequence_score(const LanguageModel& model,
                      std::span<const TokenId> tokens) {
  return windowed_score(model, tokens, Window::unbounded());
}

double windowed_score(const LanguageModel& model,
                      std::span<const TokenId> tokens, Window win) {
  if (tokens.empty()) throw InputError("cannot score an empty sequence");
  const std::vector<double> terms = token_log_probs(model, tokens);
  return mean_of_window(terms, win);
}

double HistoryScorer::advance(State& state, TokenId token) const {
  const double lp = model_->log_prob(state.history, token);
  state.history.push_back(token);
  return lp;
}

}  // namespace wbseg
