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

#include "skelgraph/ssp.hpp"

#include <algorithm>
#include <numeric>

namespace skelgraph {

std::vector<SparseSample> sample_subsequences(int frames, Rng& rng) {
  require(frames >= 2, ErrorCode::InvalidLength, "sparse sampling needs f >= 2, got " + std::to_string(frames));
  const int pool_size = frames - 1;
  std::vector<SparseSample> samples;
  samples.reserve(pool_size);
  IndexList pool(pool_size);
  for (int k = 1; k <= pool_size; ++k) {
    // Partial Fisher-Yates: the first k slots are a uniform k-subset.
    std::iota(pool.begin(), pool.end(), 1);
    for (int slot = 0; slot < k; ++slot) {
      const int pick = slot + static_cast<int>(rng.below(static_cast<std::uint64_t>(pool_size - slot)));
      std::swap(pool[slot], pool[pick]);
    }
    SparseSample sample;
    sample.indices.assign(pool.begin(), pool.begin() + k);
    std::sort(sample.indices.begin(), sample.indices.end());
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::vector<SparseSample> sample_subsequences(int frames, std::uint64_t seed) {
  Rng rng(seed);
  return sample_subsequences(frames, rng);
}

}  // namespace skelgraph
