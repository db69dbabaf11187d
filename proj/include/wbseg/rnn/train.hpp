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

#include <string>
#include <vector>

#include "wbseg/rnn/model.hpp"

namespace wbseg::rnn {

// A chunk of parallel streams: inputs[t][b] is read at step t by stream b and
// targets[t][b] is the token it should predict.
struct Chunk {
  std::vector<std::vector<TokenId>> inputs;
  std::vector<std::vector<TokenId>> targets;

  std::size_t steps() const { return inputs.size(); }
  std::size_t streams() const { return inputs.empty() ? 0 : inputs[0].size(); }
};

template <class T>
struct ChunkResult {
  T loss;  // mean cross-entropy over every (step, stream) target
  BasicRnnModel<T> gradients;
  std::vector<RnnState<T>> final_states;  // one per stream
};

// Forward over the chunk from the given per-stream states, then exact
// backpropagation through every step of the chunk (never further back).
template <class T>
ChunkResult<T> loss_and_gradients(const BasicRnnModel<T>& model,
                                  const Chunk& chunk,
                                  const std::vector<RnnState<T>>& initial);

// Loss only; same forward arithmetic as loss_and_gradients.
template <class T>
T chunk_loss(const BasicRnnModel<T>& model, const Chunk& chunk,
             const std::vector<RnnState<T>>& initial);

// Adam with bias correction.
class AdamOptimizer {
 public:
  AdamOptimizer(const RnnModel& shape, const RnnConfig& config);
  void update(RnnModel& model, const RnnModel& gradients);
  std::int64_t steps() const noexcept { return step_; }

 private:
  RnnConfig config_;
  RnnModel first_moment_;
  RnnModel second_moment_;
  std::int64_t step_ = 0;
};

struct TrainResult {
  RnnModel model;
  std::vector<double> epoch_losses;  // mean training loss per epoch
  std::vector<double> step_losses;   // loss of each update's chunk
};

// Lines are joined into one PAD-separated byte stream, split into
// batch_size parallel streams and cut into rho-step chunks. Throws
// InputError on an empty corpus and TrainingError on a non-finite loss.
TrainResult tbptt_train(const std::vector<std::string>& lines,
                        const RnnConfig& config);

// PAD + line + PAD token stream used for training and evaluation.
std::vector<TokenId> line_stream(const std::vector<std::string>& lines);

// Mean next-byte cross-entropy of the model over the lines, each read from
// a fresh state.
double evaluate_loss(const RnnModel& model, const std::vector<std::string>& lines);
// Fraction of positions where the argmax prediction is the next byte.
double next_byte_accuracy(const RnnModel& model, const std::string& line);

}  // namespace wbseg::rnn
