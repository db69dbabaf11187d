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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wbseg/language_model.hpp"
#include "wbseg/vocabulary.hpp"

namespace wbseg::rnn {

struct RnnConfig {
  int layers = 2;
  int width = 64;
  int embedding_dim = 32;
  // Truncation length for backpropagation through time.
  int rho = 32;
  double learning_rate = 2e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Gradient norm limit; 0 disables clipping.
  double clip_norm = 5.0;
  int batch_size = 16;
  int epochs = 1;
  // Stops training after this many updates when positive.
  std::int64_t max_steps = 0;
  std::uint64_t seed = 1;

  // Throws ConfigError when a dimension is < 1 or rho < 2.
  void validate() const;
  bool operator==(const RnnConfig&) const = default;
};

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Gate blocks are stacked in the order input, forget, candidate, output.
template <class T>
struct LstmLayer {
  Matrix<T> input_weights;      // 4W x in
  Matrix<T> recurrent_weights;  // 4W x W
  Vector<T> bias;               // 4W
};

// Lookup -> stacked LSTM -> affine -> log-softmax over the 225 byte ids.
template <class T>
struct BasicRnnModel {
  RnnConfig config;
  Matrix<T> embedding;  // E x V, one column per byte id
  std::vector<LstmLayer<T>> layers;
  Matrix<T> output_weights;  // V x W
  Vector<T> output_bias;     // V

  static constexpr std::size_t kVocabSize = Vocabulary::kByteVocabSize;

  // Uniform in +-1/sqrt(fan-in), forget-gate bias +1.
  static BasicRnnModel initialized(const RnnConfig& config);
  static BasicRnnModel zeros(const RnnConfig& config);

  template <class U>
  BasicRnnModel<U> cast() const;

  bool all_finite() const;
  std::size_t parameter_count() const;
  // Visits every parameter array with a group name.
  template <class F>
  void for_each_group(F&& f);
  template <class F>
  void for_each_group(F&& f) const;
};

template <class T>
struct RnnState {
  std::vector<Vector<T>> hidden;
  std::vector<Vector<T>> cell;

  static RnnState zeros(const RnnConfig& config);
  bool operator==(const RnnState&) const = default;
};

// Consumes one token. PAD resets the state to zero before it is read, so
// every line starts from the same context.
template <class T>
std::pair<RnnState<T>, LogProbDist> forward_step(const BasicRnnModel<T>& model,
                                                 const RnnState<T>& state,
                                                 TokenId token);

using RnnModel = BasicRnnModel<float>;
using State = RnnState<float>;

// Bytes 1..31 are dropped; everything else maps to its dense id.
std::vector<TokenId> byte_tokenize(std::string_view bytes);

// ---------------------------------------------------------------------------

template <class T>
template <class U>
BasicRnnModel<U> BasicRnnModel<T>::cast() const {
  BasicRnnModel<U> out;
  out.config = config;
  out.embedding = embedding.template cast<U>();
  for (const auto& l : layers) {
    out.layers.push_back({l.input_weights.template cast<U>(),
                          l.recurrent_weights.template cast<U>(),
                          l.bias.template cast<U>()});
  }
  out.output_weights = output_weights.template cast<U>();
  out.output_bias = output_bias.template cast<U>();
  return out;
}

template <class T>
template <class F>
void BasicRnnModel<T>::for_each_group(F&& f) {
  f("embedding", embedding);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    f(p + "input_weights", layers[l].input_weights);
    f(p + "recurrent_weights", layers[l].recurrent_weights);
    f(p + "bias", layers[l].bias);
  }
  f("output_weights", output_weights);
  f("output_bias", output_bias);
}

template <class T>
template <class F>
void BasicRnnModel<T>::for_each_group(F&& f) const {
  const_cast<BasicRnnModel*>(this)->for_each_group(
      [&](const std::string& name, const auto& m) { f(name, m); });
}

}  // namespace wbseg::rnn
