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

#include <iosfwd>
#include <string>

#include "wbseg/rnn/model.hpp"

namespace wbseg::rnn {

// Binary checkpoint: magic, format version, config, then every parameter
// array as little-endian float32 in for_each_group order. Loading restores
// the exact bits. Truncated or inconsistent files raise LoadError.
void save_rnn(const RnnModel& model, std::ostream& out);
void save_rnn(const RnnModel& model, const std::string& path);
RnnModel load_rnn(std::istream& in);
RnnModel load_rnn(const std::string& path);

}  // namespace wbseg::rnn
