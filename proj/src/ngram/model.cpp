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

#include "wbseg/ngram/model.hpp"

#include <algorithm>
#include <limits>

#include "wbseg/error.hpp"

namespace wbseg::ngram {
namespace {

constexpr double kNoProb = std::numeric_limits<double>::quiet_NaN();
// Share of the smallest unigram probability given to UNK.
constexpr double kUnkShare = 0.1;

}  // namespace

PruneConfig::PruneConfig(std::vector<std::uint64_t> thresholds)
    : thresholds_(std::move(thresholds)) {
  for (std::size_t k = 0; k < thresholds_.size(); ++k) {
    if (thresholds_[k] < 1) {
      throw ConfigError("prune threshold for order " + std::to_string(k + 1) +
                        " must be at least 1");
    }
  }
  if (!thresholds_.empty() && thresholds_[0] != 1) {
    throw ConfigError("unigrams are never pruned; order-1 threshold must be 1");
  }
}

PruneConfig PruneConfig::from_order(int from_order, std::uint64_t value) {
  if (from_order < 2) throw ConfigError("pruning starts at order 2 or above");
  std::vector<std::uint64_t> t(kMaxOrder, 1);
  for (int k = from_order; k <= kMaxOrder; ++k) t[k - 1] = value;
  return PruneConfig(std::move(t));
}

std::uint64_t PruneConfig::min_count(int k) const {
  if (k < 1 || static_cast<std::size_t>(k) > thresholds_.size()) return 1;
  return thresholds_[k - 1];
}

double kn_discount(std::uint64_t n1, std::uint64_t n2) {
  const double a = static_cast<double>(n1);
  if (n2 == 0) return std::max(0.0, std::min(0.99, a / (a + 2.0)));
  return std::clamp(a / (a + 2.0 * static_cast<double>(n2)), 0.0, 0.99);
}

NgramModel::NgramModel(int order, Vocabulary vocab, GramTrie trie,
                       std::vector<double> log_prob,
                       std::vector<double> log_backoff, KnParams params)
    : order_(order),
      vocab_(std::move(vocab)),
      trie_(std::move(trie)),
      log_prob_(std::move(log_prob)),
      log_backoff_(std::move(log_backoff)),
      params_(std::move(params)) {
  if (order_ < 1 || order_ > kMaxOrder) {
    throw ConfigError("n-gram order out of range: " + std::to_string(order_));
  }
  if (log_prob_.size() != trie_.size() || log_backoff_.size() != trie_.size()) {
    throw ConfigError("n-gram tables do not match the trie");
  }
  start_.context.fill(GramTrie::kNone);
  start_.context[0] = GramTrie::kRoot;
  for (int j = 1; j < order_; ++j) {
    start_.context[j] = trie_.child(start_.context[j - 1], Vocabulary::kBos);
  }
}

NgramModel::State NgramModel::start_state() const { return start_; }

double NgramModel::score(const State& state, TokenId token) const {
  double backoff = 0.0;
  for (int j = order_ - 1; j >= 0; --j) {
    const NodeId ctx = state.context[j];
    if (ctx == GramTrie::kNone) continue;
    const NodeId hit = trie_.child(ctx, token);
    if (hit != GramTrie::kNone && has_prob(hit)) return backoff + log_prob_[hit];
    backoff += log_backoff_[ctx];
  }
  return kNegInf;
}

double NgramModel::advance(State& state, TokenId token) const {
  const double lp = score(state, token);
  for (int j = order_ - 1; j >= 1; --j) {
    state.context[j] = trie_.child(state.context[j - 1], token);
  }
  return lp;
}

NgramModel::State NgramModel::state_for(std::span<const TokenId> history) const {
  State state = start_;
  const std::size_t keep =
      std::min<std::size_t>(history.size(), static_cast<std::size_t>(order_ - 1));
  for (TokenId t : history.subspan(history.size() - keep)) {
    vocab_.check(t);
    for (int j = order_ - 1; j >= 1; --j) {
      state.context[j] = trie_.child(state.context[j - 1], t);
    }
  }
  return state;
}

LogProbDist NgramModel::next_log_probs(std::span<const TokenId> history) const {
  for (TokenId t : history) vocab_.check(t);
  const State state = state_for(history);
  LogProbDist dist;
  dist.logp.resize(vocab_.size());
  for (TokenId id = 0; id < vocab_.size(); ++id) {
    dist.logp[id] = vocab_.is_predictable(id) ? score(state, id) : kNegInf;
  }
  return dist;
}

double NgramModel::log_prob(std::span<const TokenId> history,
                            TokenId token) const {
  vocab_.check(token);
  for (TokenId t : history) vocab_.check(t);
  if (!vocab_.is_predictable(token)) return kNegInf;
  return score(state_for(history), token);
}

std::size_t NgramModel::num_entries(int k) const {
  std::size_t n = 0;
  for (NodeId node = 1; node < trie_.size(); ++node) {
    if (static_cast<int>(trie_.depth(node)) == k && has_prob(node)) ++n;
  }
  return n;
}

std::size_t NgramModel::num_entries() const {
  std::size_t n = 0;
  for (NodeId node = 1; node < trie_.size(); ++node) n += has_prob(node);
  return n;
}

double NgramModel::unk_log_prob() const {
  const NodeId node = trie_.child(GramTrie::kRoot, Vocabulary::kUnk);
  return node == GramTrie::kNone || !has_prob(node) ? kNegInf : log_prob_[node];
}

NgramModel estimate_kn(const NgramCounts& counts, const PruneConfig& prune) {
  const GramTrie& trie = counts.trie();
  const int n = counts.order();
  const std::size_t size = trie.size();

  std::vector<std::vector<NodeId>> by_depth(n + 1);
  for (NodeId node = 1; node < size; ++node) by_depth[trie.depth(node)].push_back(node);

  // Highest order keeps raw counts; lower orders count distinct left
  // extensions.
  std::vector<std::uint64_t> adjusted(size, 0);
  for (NodeId node : by_depth[n]) adjusted[node] = counts.raw_count(node);
  for (int k = 2; k <= n; ++k) {
    for (NodeId node : by_depth[k]) ++adjusted[counts.suffix(node)];
  }

  KnParams params;
  params.discounts.resize(n);
  params.n1.resize(n);
  params.n2.resize(n);
  for (int k = 1; k <= n; ++k) {
    std::uint64_t n1 = 0, n2 = 0;
    for (NodeId node : by_depth[k]) {
      if (!counts.is_event(node)) continue;
      n1 += adjusted[node] == 1;
      n2 += adjusted[node] == 2;
    }
    params.n1[k - 1] = n1;
    params.n2[k - 1] = n2;
    params.discounts[k - 1] = kn_discount(n1, n2);
  }

  std::vector<bool> survives(size, false);
  survives[GramTrie::kRoot] = true;
  for (int k = n; k >= 1; --k) {
    const std::uint64_t threshold = prune.min_count(k);
    for (NodeId node : by_depth[k]) {
      if (counts.is_event(node) && counts.raw_count(node) >= threshold) {
        survives[node] = true;
      }
      if (survives[node]) survives[trie.parent(node)] = true;
    }
  }
  for (int k = 1; k <= n; ++k) {
    const bool any = std::any_of(by_depth[k].begin(), by_depth[k].end(),
                                 [&](NodeId node) {
                                   return survives[node] && counts.is_event(node);
                                 });
    if (!any) {
      throw TrainingError("no " + std::to_string(k) +
                          "-grams survive counting and pruning");
    }
  }

  // Each context keeps its full mass; what pruned events held moves to the
  // backoff weight, so every distribution stays normalized.
  std::vector<double> denominator(size, 0.0);
  std::vector<double> pruned(size, 0.0);
  std::vector<std::uint32_t> children(size, 0);
  for (NodeId node = 1; node < size; ++node) {
    if (!counts.is_event(node)) continue;
    const NodeId ctx = trie.parent(node);
    denominator[ctx] += static_cast<double>(adjusted[node]);
    if (survives[node]) {
      ++children[ctx];
    } else {
      pruned[ctx] += static_cast<double>(adjusted[node]);
    }
  }
  std::vector<double> gamma(size, 1.0);
  for (NodeId node = 0; node < size; ++node) {
    if (denominator[node] == 0) continue;
    const double d = params.discounts[trie.depth(node)];
    gamma[node] = (d * children[node] + pruned[node]) / denominator[node];
  }

  // prob holds the interpolated probability of surviving events; lower holds
  // what a backoff query returns for every event, surviving or not.
  std::vector<double> prob(size, 0.0);
  std::vector<double> lower(size, 0.0);
  const double vocab_events = static_cast<double>(children[GramTrie::kRoot]);
  bool unk_seen = false;
  double min_unigram = 1.0;
  for (NodeId node : by_depth[1]) {
    if (!counts.is_event(node)) continue;
    const double d = params.discounts[0];
    prob[node] = (adjusted[node] - d) / denominator[GramTrie::kRoot] +
                 gamma[GramTrie::kRoot] / vocab_events;
    min_unigram = std::min(min_unigram, prob[node]);
    unk_seen |= trie.token(node) == Vocabulary::kUnk;
  }
  const double unk_prob = unk_seen ? 0.0 : kUnkShare * min_unigram;
  for (NodeId node : by_depth[1]) {
    if (!counts.is_event(node)) continue;
    prob[node] *= 1.0 - unk_prob;
    lower[node] = prob[node];
  }
  for (int k = 2; k <= n; ++k) {
    const double d = params.discounts[k - 1];
    for (NodeId node : by_depth[k]) {
      if (!counts.is_event(node)) continue;
      const NodeId ctx = trie.parent(node);
      const double backed_off = gamma[ctx] * lower[counts.suffix(node)];
      if (survives[node]) {
        prob[node] = (adjusted[node] - d) / denominator[ctx] + backed_off;
        lower[node] = prob[node];
      } else {
        lower[node] = backed_off;
      }
    }
  }

  // Compact copy of the survivors, parents before children.
  GramTrie out;
  std::vector<NodeId> remap(size, GramTrie::kNone);
  remap[GramTrie::kRoot] = GramTrie::kRoot;
  std::vector<double> log_prob{kNoProb};
  std::vector<double> log_backoff{std::log(gamma[GramTrie::kRoot])};
  for (int k = 1; k <= n; ++k) {
    for (NodeId node : by_depth[k]) {
      if (!survives[node]) continue;
      remap[node] = out.insert(remap[trie.parent(node)], trie.token(node));
      log_prob.push_back(counts.is_event(node) ? std::log(prob[node]) : kNoProb);
      log_backoff.push_back(k < n ? std::log(gamma[node]) : 0.0);
    }
  }
  if (!unk_seen) {
    out.insert(GramTrie::kRoot, Vocabulary::kUnk);
    log_prob.push_back(std::log(unk_prob));
    log_backoff.push_back(0.0);
  }
  return NgramModel(n, counts.vocabulary(), std::move(out), std::move(log_prob),
                    std::move(log_backoff), std::move(params));
}

}  // namespace wbseg::ngram
