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

#include "wbseg/rnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wbseg/error.hpp"

namespace wbseg::rnn {

void RnnConfig::validate() const {
  if (layers < 1 || width < 1 || embedding_dim < 1 || batch_size < 1 || epochs < 1) {
    throw ConfigError("rnn dimensions, batch size and epochs must be >= 1");
  }
  if (rho < 2) throw ConfigError("rnn truncation length rho must be >= 2");
  if (!(learning_rate > 0) || !(epsilon > 0) || beta1 < 0 || beta1 >= 1 ||
      beta2 < 0 || beta2 >= 1) {
    throw ConfigError("invalid Adam hyperparameters");
  }
}

template <class T>
BasicRnnModel<T> BasicRnnModel<T>::zeros(const RnnConfig& config) {
  config.validate();
  const int v = static_cast<int>(kVocabSize);
  const int w = config.width;
  BasicRnnModel m;
  m.config = config;
  m.embedding = Matrix<T>::Zero(config.embedding_dim, v);
  for (int l = 0; l < config.layers; ++l) {
    const int in = l == 0 ? config.embedding_dim : w;
    m.layers.push_back({Matrix<T>::Zero(4 * w, in), Matrix<T>::Zero(4 * w, w),
                        Vector<T>::Zero(4 * w)});
  }
  m.output_weights = Matrix<T>::Zero(v, w);
  m.output_bias = Vector<T>::Zero(v);
  return m;
}

template <class T>
BasicRnnModel<T> BasicRnnModel<T>::initialized(const RnnConfig& config) {
  BasicRnnModel m = zeros(config);
  std::mt19937_64 rng(config.seed);
  auto fill = [&](auto& array, double fan_in) {
    std::uniform_real_distribution<double> dist(-1.0 / std::sqrt(fan_in),
                                                1.0 / std::sqrt(fan_in));
    for (Eigen::Index i = 0; i < array.size(); ++i) {
      array.data()[i] = static_cast<T>(dist(rng));
    }
  };
  // A one-hot lookup has a single active input.
  fill(m.embedding, 1.0);
  const int w = config.width;
  for (int l = 0; l < config.layers; ++l) {
    auto& layer = m.layers[l];
    fill(layer.input_weights, static_cast<double>(layer.input_weights.cols()));
    fill(layer.recurrent_weights, w);
    fill(layer.bias, w);
    layer.bias.segment(w, w).array() += T(1);
  }
  fill(m.output_weights, w);
  fill(m.output_bias, w);
  return m;
}

template <class T>
bool BasicRnnModel<T>::all_finite() const {
  bool ok = true;
  for_each_group([&](const std::string&, const auto& a) { ok = ok && a.allFinite(); });
  return ok;
}

template <class T>
std::size_t BasicRnnModel<T>::parameter_count() const {
  std::size_t n = 0;
  for_each_group([&](const std::string&, const auto& a) { n += a.size(); });
  return n;
}

template <class T>
RnnState<T> RnnState<T>::zeros(const RnnConfig& config) {
  RnnState s;
  for (int l = 0; l < config.layers; ++l) {
    s.hidden.push_back(Vector<T>::Zero(config.width));
    s.cell.push_back(Vector<T>::Zero(config.width));
  }
  return s;
}

namespace {

template <class T>
T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

template <class T>
void check_state(const BasicRnnModel<T>& model, const RnnState<T>& state) {
  const std::size_t layers = model.layers.size();
  bool ok = state.hidden.size() == layers && state.cell.size() == layers;
  for (std::size_t l = 0; ok && l < layers; ++l) {
    ok = state.hidden[l].size() == model.config.width &&
         state.cell[l].size() == model.config.width;
  }
  if (!ok) throw InputError("rnn state dimensions do not match the model");
}

}  // namespace

template <class T>
std::pair<RnnState<T>, LogProbDist> forward_step(const BasicRnnModel<T>& model,
                                                 const RnnState<T>& state,
                                                 TokenId token) {
  check_state(model, state);
  if (token >= BasicRnnModel<T>::kVocabSize) {
    throw InputError("byte token id " + std::to_string(token) + " out of range");
  }
  RnnState<T> next = token == Vocabulary::kPad ? RnnState<T>::zeros(model.config) : state;
  const Eigen::Index w = model.config.width;
  Vector<T> x = model.embedding.col(token);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    Vector<T> z = layer.input_weights * x + layer.recurrent_weights * next.hidden[l] + layer.bias;
    Vector<T>& c = next.cell[l];
    Vector<T>& h = next.hidden[l];
    for (Eigen::Index k = 0; k < w; ++k) {
      const T i = sigmoid(z(k));
      const T f = sigmoid(z(w + k));
      const T g = std::tanh(z(2 * w + k));
      const T o = sigmoid(z(3 * w + k));
      c(k) = f * c(k) + i * g;
      h(k) = o * std::tanh(c(k));
    }
    x = h;
  }
  const Vector<T> logits = model.output_weights * x + model.output_bias;
  LogProbDist dist;
  dist.logp.resize(logits.size());
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < logits.size(); ++k) {
    hi = std::max(hi, static_cast<double>(logits(k)));
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < logits.size(); ++k) {
    sum += std::exp(static_cast<double>(logits(k)) - hi);
  }
  const double lse = hi + std::log(sum);
  for (Eigen::Index k = 0; k < logits.size(); ++k) {
    dist.logp[k] = static_cast<double>(logits(k)) - lse;
  }
  return {std::move(next), std::move(dist)};
}

std::vector<TokenId> byte_tokenize(std::string_view bytes) {
  static const Vocabulary vocab = Vocabulary::bytes();
  return vocab.encode(bytes);
}

template struct BasicRnnModel<float>;
template struct BasicRnnModel<double>;
template struct BasicRnnModel<long double>;
template struct RnnState<float>;
template struct RnnState<double>;
template struct RnnState<long double>;
template std::pair<RnnState<float>, LogProbDist> forward_step(
    const BasicRnnModel<float>&, const RnnState<float>&, TokenId);
template std::pair<RnnState<double>, LogProbDist> forward_step(
    const BasicRnnModel<double>&, const RnnState<double>&, TokenId);
template std::pair<RnnState<long double>, LogProbDist> forward_step(
    const BasicRnnModel<long double>&, const RnnState<long double>&, TokenId);

}  // namespace wbseg::rnn
