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

#include "wbseg/rnn/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "wbseg/error.hpp"

namespace wbseg::rnn {
namespace {

constexpr char kMagic[8] = {'W', 'B', 'S', 'E', 'G', 'R', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

template <class U>
void put(std::ostream& out, U value) {
  unsigned char bytes[sizeof(U)];
  std::memcpy(bytes, &value, sizeof(U));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(U));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

template <class U>
U get(std::istream& in) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) {
    throw LoadError("truncated rnn checkpoint");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(U));
  }
  U value;
  std::memcpy(&value, bytes, sizeof(U));
  return value;
}

}  // namespace

void save_rnn(const RnnModel& model, std::ostream& out) {
  const RnnConfig& c = model.config;
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  for (int v : {c.layers, c.width, c.embedding_dim, c.rho, c.batch_size, c.epochs}) {
    put<std::int32_t>(out, v);
  }
  for (double v : {c.learning_rate, c.beta1, c.beta2, c.epsilon, c.clip_norm}) {
    put<double>(out, v);
  }
  put<std::int64_t>(out, c.max_steps);
  put<std::uint64_t>(out, c.seed);
  put<std::uint64_t>(out, model.parameter_count());
  model.for_each_group([&](const std::string&, const auto& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) put<float>(out, a.data()[i]);
  });
  if (!out) throw Error("failed to write rnn checkpoint");
}

void save_rnn(const RnnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  save_rnn(model, out);
}

RnnModel load_rnn(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw LoadError("not an rnn checkpoint");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw LoadError("unsupported rnn checkpoint version " + std::to_string(version));
  }
  RnnConfig c;
  for (int* v : {&c.layers, &c.width, &c.embedding_dim, &c.rho, &c.batch_size, &c.epochs}) {
    *v = get<std::int32_t>(in);
  }
  for (double* v : {&c.learning_rate, &c.beta1, &c.beta2, &c.epsilon, &c.clip_norm}) {
    *v = get<double>(in);
  }
  c.max_steps = get<std::int64_t>(in);
  c.seed = get<std::uint64_t>(in);
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw LoadError(std::string("inconsistent rnn checkpoint: ") + e.what());
  }
  // Guards the allocation below against garbage dimensions.
  if (c.layers > 64 || c.width > 1 << 14 || c.embedding_dim > 1 << 14) {
    throw LoadError("inconsistent rnn checkpoint: implausible dimensions");
  }
  RnnModel model = RnnModel::zeros(c);
  if (get<std::uint64_t>(in) != model.parameter_count()) {
    throw LoadError("inconsistent rnn checkpoint: parameter count mismatch");
  }
  model.for_each_group([&](const std::string&, auto& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = get<float>(in);
  });
  if (in.peek() != std::char_traits<char>::eof()) {
    throw LoadError("trailing bytes after rnn checkpoint");
  }
  return model;
}

RnnModel load_rnn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  return load_rnn(in);
}

}  // namespace wbseg::rnn
