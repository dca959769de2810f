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

// Pre-training and fine-tuning loops.
//
// Each minibatch is cut into fixed-size chunks. Every chunk gets its own
// tape and gradient buffer, and the buffers are summed in chunk order, so
// results do not depend on the number of worker threads.

#ifndef SKELGRAPH_TRAINER_HPP
#define SKELGRAPH_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "skelgraph/model.hpp"
#include "skelgraph/optimizer.hpp"

namespace skelgraph {

struct TrainConfig {
  int epochs = 150;
  int batch_size = 256;
  int chunk_size = 16;
  int threads = 1;
  AdamConfig adam;
  double beta = kDefaultWeightDecay;  // fine-tuning only
  std::uint64_t seed = 1;
  /// Stop after this many epochs without a lower loss; 0 disables.
  int patience = 0;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double loss = 0;
  double train_rank1 = 0;  // fine-tuning only
};

struct TrainResult {
  std::vector<EpochRecord> log;
  /// First epoch whose train Rank-1 reached 100, or 0 if never.
  int milestone_epoch = 0;
  AdamState optimizer;
};

/// Runs fn(k) for k in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Self-supervised prediction training. Continues from `resume` when given.
TrainResult pretrain(Model& model, const std::vector<SkeletonSequence>& train, const TrainConfig& config,
                     std::optional<AdamState> resume = std::nullopt);

/// Cross-entropy training of the whole network with a fresh optimizer.
TrainResult finetune(Model& model, const std::vector<SkeletonSequence>& train, const TrainConfig& config);

/// `epoch,ssp_loss` rows.
std::string format_pretrain_log(const std::vector<EpochRecord>& log);
/// `epoch,train_loss,train_rank1` rows.
std::string format_finetune_log(const std::vector<EpochRecord>& log);

}  // namespace skelgraph

#endif  // SKELGRAPH_TRAINER_HPP
