/*
 * Copyright 2026 The skelgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Binary checkpoints: "SKGC", u32 version, u64 metadata length, metadata as
// sorted key=value lines, u64 entry count, then per entry u32 name length,
// name, u32 rank, u64 dims, row-major little-endian float64 values. An
// optional optimizer block follows: u8 flag, i64 step, lr, beta1, beta2,
// epsilon, then every first moment and every second moment.

#ifndef SKELGRAPH_CHECKPOINT_HPP
#define SKELGRAPH_CHECKPOINT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "skelgraph/optimizer.hpp"

namespace skelgraph {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::map<std::string, std::string> metadata;
  ParameterStore parameters;
  std::optional<AdamState> optimizer;
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace skelgraph

#endif  // SKELGRAPH_CHECKPOINT_HPP
