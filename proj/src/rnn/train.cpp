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

#include "wbseg/rnn/train.hpp"

#include <algorithm>
#include <cmath>

#include "wbseg/error.hpp"

namespace wbseg::rnn {
namespace {

// Per-step, per-layer activations kept for the backward pass.
template <class T>
struct StepCache {
  Matrix<T> input, h_prev, c_prev, i, f, g, o, tanh_c;
};

template <class T>
struct ForwardResult {
  T loss = 0;
  std::vector<std::vector<StepCache<T>>> cache;  // [t][layer]
  std::vector<Matrix<T>> dlogits;                // [t], only when caching
  std::vector<Matrix<T>> hidden, cell;           // final, per layer
};

template <class T>
Matrix<T> sigmoid(const Matrix<T>& z) {
  return (T(1) + (-z.array()).exp()).inverse().matrix();
}

void check_chunk(const Chunk& chunk, std::size_t streams) {
  if (chunk.steps() == 0 || chunk.streams() == 0) {
    throw InputError("empty training chunk");
  }
  if (chunk.targets.size() != chunk.steps() || streams != chunk.streams()) {
    throw InputError("chunk and state shapes disagree");
  }
  for (std::size_t t = 0; t < chunk.steps(); ++t) {
    if (chunk.inputs[t].size() != streams || chunk.targets[t].size() != streams) {
      throw InputError("ragged training chunk");
    }
    for (std::size_t b = 0; b < streams; ++b) {
      if (chunk.inputs[t][b] >= Vocabulary::kByteVocabSize ||
          chunk.targets[t][b] >= Vocabulary::kByteVocabSize) {
        throw InputError("byte token id out of range in chunk");
      }
    }
  }
}

template <class T>
ForwardResult<T> forward(const BasicRnnModel<T>& model, const Chunk& chunk,
                         const std::vector<RnnState<T>>& initial, bool keep) {
  const std::size_t streams = initial.size();
  check_chunk(chunk, streams);
  const auto nb = static_cast<Eigen::Index>(streams);
  const Eigen::Index w = model.config.width;
  const std::size_t layers = model.layers.size();
  ForwardResult<T> r;
  for (std::size_t l = 0; l < layers; ++l) {
    r.hidden.push_back(Matrix<T>(w, nb));
    r.cell.push_back(Matrix<T>(w, nb));
    for (std::size_t b = 0; b < streams; ++b) {
      if (initial[b].hidden.size() != layers || initial[b].hidden[l].size() != w ||
          initial[b].cell[l].size() != w) {
        throw InputError("rnn state dimensions do not match the model");
      }
      r.hidden[l].col(b) = initial[b].hidden[l];
      r.cell[l].col(b) = initial[b].cell[l];
    }
  }
  const T scale = T(1) / static_cast<T>(chunk.steps() * streams);
  for (std::size_t t = 0; t < chunk.steps(); ++t) {
    Matrix<T> x(model.config.embedding_dim, nb);
    for (std::size_t b = 0; b < streams; ++b) {
      const TokenId tok = chunk.inputs[t][b];
      x.col(b) = model.embedding.col(tok);
      if (tok == Vocabulary::kPad) {
        for (std::size_t l = 0; l < layers; ++l) {
          r.hidden[l].col(b).setZero();
          r.cell[l].col(b).setZero();
        }
      }
    }
    std::vector<StepCache<T>> step;
    for (std::size_t l = 0; l < layers; ++l) {
      const auto& layer = model.layers[l];
      Matrix<T> z = layer.input_weights * x + layer.recurrent_weights * r.hidden[l];
      z.colwise() += layer.bias;
      StepCache<T> c;
      c.i = sigmoid<T>(z.topRows(w));
      c.f = sigmoid<T>(z.middleRows(w, w));
      c.g = z.middleRows(2 * w, w).array().tanh().matrix();
      c.o = sigmoid<T>(z.bottomRows(w));
      Matrix<T> cell = (c.f.array() * r.cell[l].array() + c.i.array() * c.g.array()).matrix();
      c.tanh_c = cell.array().tanh().matrix();
      Matrix<T> hidden = (c.o.array() * c.tanh_c.array()).matrix();
      if (keep) {
        c.input = std::move(x);
        c.h_prev = std::move(r.hidden[l]);
        c.c_prev = std::move(r.cell[l]);
      }
      r.hidden[l] = hidden;
      r.cell[l] = std::move(cell);
      x = std::move(hidden);
      if (keep) step.push_back(std::move(c));
    }
    Matrix<T> logits = model.output_weights * x;
    logits.colwise() += model.output_bias;
    for (Eigen::Index b = 0; b < nb; ++b) {
      const T hi = logits.col(b).maxCoeff();
      const T lse = hi + std::log((logits.col(b).array() - hi).exp().sum());
      logits.col(b).array() -= lse;
      r.loss -= logits(chunk.targets[t][b], b) * scale;
    }
    if (keep) {
      Matrix<T> d = logits.array().exp().matrix();
      for (Eigen::Index b = 0; b < nb; ++b) d(chunk.targets[t][b], b) -= T(1);
      r.dlogits.push_back(d * scale);
      r.cache.push_back(std::move(step));
    }
  }
  return r;
}

template <class T>
std::vector<RnnState<T>> unpack(const ForwardResult<T>& r, std::size_t streams) {
  std::vector<RnnState<T>> out(streams);
  for (std::size_t b = 0; b < streams; ++b) {
    for (std::size_t l = 0; l < r.hidden.size(); ++l) {
      out[b].hidden.push_back(r.hidden[l].col(b));
      out[b].cell.push_back(r.cell[l].col(b));
    }
  }
  return out;
}

double squared_norm(const RnnModel& m) {
  double s = 0.0;
  m.for_each_group([&](const std::string&, const auto& a) {
    s += a.template cast<double>().squaredNorm();
  });
  return s;
}

}  // namespace

template <class T>
ChunkResult<T> loss_and_gradients(const BasicRnnModel<T>& model, const Chunk& chunk,
                                  const std::vector<RnnState<T>>& initial) {
  ForwardResult<T> fw = forward(model, chunk, initial, true);
  const std::size_t layers = model.layers.size();
  const Eigen::Index w = model.config.width;
  const auto nb = static_cast<Eigen::Index>(initial.size());
  BasicRnnModel<T> g = BasicRnnModel<T>::zeros(model.config);
  std::vector<Matrix<T>> dh(layers, Matrix<T>::Zero(w, nb));
  std::vector<Matrix<T>> dc(layers, Matrix<T>::Zero(w, nb));
  for (std::size_t t = chunk.steps(); t-- > 0;) {
    const auto& step = fw.cache[t];
    const Matrix<T>& dl = fw.dlogits[t];
    const Matrix<T>& top = step[layers - 1].o.cwiseProduct(step[layers - 1].tanh_c);
    g.output_weights.noalias() += dl * top.transpose();
    g.output_bias += dl.rowwise().sum();
    Matrix<T> dx = model.output_weights.transpose() * dl;
    for (std::size_t l = layers; l-- > 0;) {
      const auto& c = step[l];
      const auto& layer = model.layers[l];
      const Matrix<T> dhid = dx + dh[l];
      const auto one = T(1);
      Matrix<T> dcell = (dhid.array() * c.o.array() * (one - c.tanh_c.array().square()) +
                         dc[l].array())
                            .matrix();
      Matrix<T> dz(4 * w, nb);
      dz.topRows(w) = (dcell.array() * c.g.array() * c.i.array() * (one - c.i.array())).matrix();
      dz.middleRows(w, w) =
          (dcell.array() * c.c_prev.array() * c.f.array() * (one - c.f.array())).matrix();
      dz.middleRows(2 * w, w) =
          (dcell.array() * c.i.array() * (one - c.g.array().square())).matrix();
      dz.bottomRows(w) =
          (dhid.array() * c.tanh_c.array() * c.o.array() * (one - c.o.array())).matrix();
      g.layers[l].input_weights.noalias() += dz * c.input.transpose();
      g.layers[l].recurrent_weights.noalias() += dz * c.h_prev.transpose();
      g.layers[l].bias += dz.rowwise().sum();
      dx = layer.input_weights.transpose() * dz;
      dh[l] = layer.recurrent_weights.transpose() * dz;
      dc[l] = (dcell.array() * c.f.array()).matrix();
    }
    for (Eigen::Index b = 0; b < nb; ++b) {
      const TokenId tok = chunk.inputs[t][b];
      g.embedding.col(tok) += dx.col(b);
      // The state was reset before this step; nothing flows further back.
      if (tok == Vocabulary::kPad) {
        for (std::size_t l = 0; l < layers; ++l) {
          dh[l].col(b).setZero();
          dc[l].col(b).setZero();
        }
      }
    }
  }
  return {fw.loss, std::move(g), unpack(fw, initial.size())};
}

template <class T>
T chunk_loss(const BasicRnnModel<T>& model, const Chunk& chunk,
             const std::vector<RnnState<T>>& initial) {
  return forward(model, chunk, initial, false).loss;
}

template ChunkResult<float> loss_and_gradients(const BasicRnnModel<float>&, const Chunk&,
                                               const std::vector<RnnState<float>>&);
template ChunkResult<double> loss_and_gradients(const BasicRnnModel<double>&, const Chunk&,
                                                const std::vector<RnnState<double>>&);
template ChunkResult<long double> loss_and_gradients(
    const BasicRnnModel<long double>&, const Chunk&, const std::vector<RnnState<long double>>&);
template float chunk_loss(const BasicRnnModel<float>&, const Chunk&,
                          const std::vector<RnnState<float>>&);
template double chunk_loss(const BasicRnnModel<double>&, const Chunk&,
                           const std::vector<RnnState<double>>&);
template long double chunk_loss(const BasicRnnModel<long double>&, const Chunk&,
                                const std::vector<RnnState<long double>>&);

AdamOptimizer::AdamOptimizer(const RnnModel& shape, const RnnConfig& config)
    : config_(config),
      first_moment_(RnnModel::zeros(shape.config)),
      second_moment_(RnnModel::zeros(shape.config)) {}

void AdamOptimizer::update(RnnModel& model, const RnnModel& gradients) {
  ++step_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  std::vector<float*> params, grads, ms, vs;
  std::vector<Eigen::Index> sizes;
  model.for_each_group([&](const std::string&, auto& a) {
    params.push_back(a.data());
    sizes.push_back(a.size());
  });
  gradients.for_each_group(
      [&](const std::string&, const auto& a) { grads.push_back(const_cast<float*>(a.data())); });
  first_moment_.for_each_group([&](const std::string&, auto& a) { ms.push_back(a.data()); });
  second_moment_.for_each_group([&](const std::string&, auto& a) { vs.push_back(a.data()); });
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (Eigen::Index i = 0; i < sizes[k]; ++i) {
      const double gr = grads[k][i];
      const double m = b1 * ms[k][i] + (1.0 - b1) * gr;
      const double v = b2 * vs[k][i] + (1.0 - b2) * gr * gr;
      ms[k][i] = static_cast<float>(m);
      vs[k][i] = static_cast<float>(v);
      params[k][i] -= static_cast<float>(config_.learning_rate * (m / c1) /
                                         (std::sqrt(v / c2) + config_.epsilon));
    }
  }
}

std::vector<TokenId> line_stream(const std::vector<std::string>& lines) {
  std::vector<TokenId> out{Vocabulary::kPad};
  for (const auto& line : lines) {
    const auto ids = byte_tokenize(line);
    out.insert(out.end(), ids.begin(), ids.end());
    out.push_back(Vocabulary::kPad);
  }
  return out;
}

TrainResult tbptt_train(const std::vector<std::string>& lines, const RnnConfig& config) {
  config.validate();
  const std::vector<TokenId> stream = line_stream(lines);
  if (stream.size() < 2) throw InputError("empty training corpus");
  const std::size_t pairs = stream.size() - 1;
  const std::size_t streams =
      std::min(static_cast<std::size_t>(config.batch_size), pairs);
  const std::size_t span = pairs / streams;
  const auto rho = static_cast<std::size_t>(config.rho);

  TrainResult result{RnnModel::initialized(config), {}, {}};
  AdamOptimizer adam(result.model, config);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<State> states(streams, State::zeros(config));
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start < span; start += rho) {
      if (config.max_steps > 0 && adam.steps() >= config.max_steps) break;
      const std::size_t steps = std::min(rho, span - start);
      Chunk chunk;
      chunk.inputs.assign(steps, std::vector<TokenId>(streams));
      chunk.targets.assign(steps, std::vector<TokenId>(streams));
      for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t b = 0; b < streams; ++b) {
          const std::size_t pos = b * span + start + t;
          chunk.inputs[t][b] = stream[pos];
          chunk.targets[t][b] = stream[pos + 1];
        }
      }
      ChunkResult<float> r = loss_and_gradients(result.model, chunk, states);
      if (!std::isfinite(r.loss) || !r.gradients.all_finite()) {
        throw TrainingError("non-finite loss at update " + std::to_string(adam.steps() + 1));
      }
      if (config.clip_norm > 0) {
        const double norm = std::sqrt(squared_norm(r.gradients));
        if (norm > config.clip_norm) {
          const auto s = static_cast<float>(config.clip_norm / norm);
          r.gradients.for_each_group([&](const std::string&, auto& a) { a *= s; });
        }
      }
      adam.update(result.model, r.gradients);
      states = std::move(r.final_states);
      result.step_losses.push_back(r.loss);
      sum += r.loss;
      ++count;
    }
    if (count == 0) break;
    result.epoch_losses.push_back(sum / static_cast<double>(count));
  }
  if (!result.model.all_finite()) throw TrainingError("training produced non-finite weights");
  return result;
}

double evaluate_loss(const RnnModel& model, const std::vector<std::string>& lines) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& line : lines) {
    const std::vector<TokenId> ids = line_stream({line});
    State state = State::zeros(model.config);
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      auto [next, dist] = forward_step(model, state, ids[i]);
      total -= dist.logp[ids[i + 1]];
      ++n;
      state = std::move(next);
    }
  }
  if (n == 0) throw InputError("no lines to evaluate");
  return total / static_cast<double>(n);
}

double next_byte_accuracy(const RnnModel& model, const std::string& line) {
  const std::vector<TokenId> ids = line_stream({line});
  State state = State::zeros(model.config);
  std::size_t hits = 0;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    auto [next, dist] = forward_step(model, state, ids[i]);
    hits += dist.argmax() == ids[i + 1];
    state = std::move(next);
  }
  return static_cast<double>(hits) / static_cast<double>(ids.size() - 1);
}

}  // namespace wbseg::rnn
