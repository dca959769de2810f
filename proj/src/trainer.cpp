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

#include "skelgraph/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "skelgraph/evaluation.hpp"
#include "skelgraph/text.hpp"

namespace skelgraph {

namespace {

void check_config(const TrainConfig& c) {
  require(c.epochs >= 0, ErrorCode::InvalidConfig, "epochs must be non-negative");
  require(c.batch_size > 0 && c.chunk_size > 0 && c.threads > 0, ErrorCode::InvalidConfig,
          "batch_size, chunk_size and threads must be positive");
  require(c.patience >= 0, ErrorCode::InvalidConfig, "patience must be non-negative");
}

IndexList shuffled(int count, Rng& rng) {
  IndexList order(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) order[k] = k;
  for (int k = count - 1; k > 0; --k) std::swap(order[k], order[rng.below(static_cast<std::uint64_t>(k) + 1)]);
  return order;
}

std::vector<IndexList> split_chunks(const IndexList& members, int chunk_size) {
  std::vector<IndexList> chunks;
  for (std::size_t start = 0; start < members.size(); start += static_cast<std::size_t>(chunk_size)) {
    const auto stop = std::min(members.size(), start + static_cast<std::size_t>(chunk_size));
    chunks.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(start),
                        members.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return chunks;
}

/// Loss and summed gradient of one minibatch; `chunk_loss(k, grads)` handles
/// chunk k and accumulates into its own buffer.
double minibatch_step(Model& model, int chunks, int threads,
                      const std::function<double(int, GradientList&)>& chunk_loss) {
  std::vector<GradientList> grads(static_cast<std::size_t>(chunks));
  std::vector<double> losses(static_cast<std::size_t>(chunks), 0.0);
  parallel_for(chunks, threads, [&](int k) {
    grads[k] = model.parameters().zero_gradients();
    losses[k] = chunk_loss(k, grads[k]);
  });
  GradientList total = std::move(grads[0]);
  double loss = losses[0];
  for (int k = 1; k < chunks; ++k) {
    for (std::size_t p = 0; p < total.size(); ++p) total[p] += grads[k][p];
    loss += losses[k];
  }
  model.parameters().set_gradients(total);
  return loss;
}

bool stalled(const std::vector<EpochRecord>& log, int patience) {
  if (patience <= 0 || static_cast<int>(log.size()) <= patience) return false;
  double best_before = log.front().loss;
  for (std::size_t k = 0; k + patience < log.size(); ++k) best_before = std::min(best_before, log[k].loss);
  for (std::size_t k = log.size() - patience; k < log.size(); ++k)
    if (log[k].loss < best_before) return false;
  return true;
}

}  // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  const int workers = std::min(count, std::max(1, threads));
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next++; k < count; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> guard(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

TrainResult pretrain(Model& model, const std::vector<SkeletonSequence>& train, const TrainConfig& config,
                     std::optional<AdamState> resume) {
  check_config(config);
  require(!train.empty(), ErrorCode::InvalidConfig, "pre-training needs at least one sequence");
  const int frames = model.config().frames;
  TrainResult result;
  result.optimizer = resume ? std::move(*resume) : make_adam(model.parameters(), config.adam);
  Rng rng(config.seed);
  const int count = static_cast<int>(train.size());
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const IndexList order = shuffled(count, rng);
    double epoch_loss = 0;
    for (const IndexList& members : split_chunks(order, config.batch_size)) {
      const std::vector<IndexList> chunks = split_chunks(members, config.chunk_size);
      std::vector<SampleSet> samples;
      for (const IndexList& chunk : chunks) samples.push_back(draw_samples(static_cast<int>(chunk.size()), frames, rng));
      const double weight = 1.0 / static_cast<double>(members.size());
      epoch_loss += minibatch_step(model, static_cast<int>(chunks.size()), config.threads,
                                   [&](int k, GradientList& grads) {
                                     const Batch batch = make_batch(train, chunks[k], frames);
                                     return model.prediction_objective(batch, samples[k], weight, &grads);
                                   }) *
                    static_cast<double>(members.size());
      adam_step(result.optimizer, model.parameters());
    }
    result.log.push_back({epoch, epoch_loss / count, 0.0});
    if (stalled(result.log, config.patience)) break;
  }
  return result;
}

TrainResult finetune(Model& model, const std::vector<SkeletonSequence>& train, const TrainConfig& config) {
  check_config(config);
  require(!train.empty(), ErrorCode::InvalidConfig, "fine-tuning needs at least one sequence");
  for (const auto& seq : train)
    require(seq.label >= 1 && seq.label <= model.config().classes, ErrorCode::InvalidLabel,
            "label " + std::to_string(seq.label) + " of " + seq.source_id + " outside 1.." +
                std::to_string(model.config().classes));
  const int frames = model.config().frames;
  TrainResult result;
  result.optimizer = make_adam(model.parameters(), config.adam);
  Rng rng(config.seed);
  const int count = static_cast<int>(train.size());
  const Batch everything = make_batch(train, frames);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const IndexList order = shuffled(count, rng);
    double epoch_loss = 0;
    for (const IndexList& members : split_chunks(order, config.batch_size)) {
      const std::vector<IndexList> chunks = split_chunks(members, config.chunk_size);
      const double weight = 1.0 / static_cast<double>(members.size());
      epoch_loss += minibatch_step(model, static_cast<int>(chunks.size()), config.threads,
                                   [&](int k, GradientList& grads) {
                                     const Batch batch = make_batch(train, chunks[k], frames);
                                     return model.recognition_objective(batch, weight, k == 0 ? config.beta : 0.0,
                                                                        &grads);
                                   }) *
                    static_cast<double>(members.size());
      adam_step(result.optimizer, model.parameters());
    }
    const double accuracy = rank1(cmc(model.scores(everything), everything.labels));
    result.log.push_back({epoch, epoch_loss / count, accuracy});
    if (result.milestone_epoch == 0 && accuracy >= 100.0) result.milestone_epoch = epoch;
    if (stalled(result.log, config.patience)) break;
  }
  return result;
}

std::string format_pretrain_log(const std::vector<EpochRecord>& log) {
  std::string out = "epoch,ssp_loss\n";
  for (const auto& r : log) out += std::to_string(r.epoch) + "," + text::format_double(r.loss) + "\n";
  return out;
}

std::string format_finetune_log(const std::vector<EpochRecord>& log) {
  std::string out = "epoch,train_loss,train_rank1\n";
  for (const auto& r : log)
    out += std::to_string(r.epoch) + "," + text::format_double(r.loss) + "," + text::format_double(r.train_rank1) +
           "\n";
  return out;
}

}  // namespace skelgraph
