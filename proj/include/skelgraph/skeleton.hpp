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

// Skeleton sequences: preprocessing, synthetic gait generation and the
// on-disk sequence/manifest formats.

#ifndef SKELGRAPH_SKELETON_HPP
#define SKELGRAPH_SKELETON_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skelgraph/layout.hpp"

namespace skelgraph {

/// J x 3 joint coordinates.
using SkeletonFrame = MatrixXd;

struct SkeletonSequence {
  std::vector<SkeletonFrame> frames;
  int label = 0;  // identity in 1..C; 0 when unlabeled
  std::string source_id;

  int length() const { return static_cast<int>(frames.size()); }
  int joint_count() const { return frames.empty() ? 0 : static_cast<int>(frames.front().rows()); }
};

struct DatasetSplit {
  std::string layout;
  std::vector<SkeletonSequence> train;
  std::vector<SkeletonSequence> test;
  int num_classes = 0;
};

/// Throws unless the sequence is non-empty, J x 3 everywhere and finite.
void validate_sequence(const SkeletonSequence& seq, int joint_count);
void validate_dataset(const DatasetSplit& data);

SkeletonSequence trim_sequence(const SkeletonSequence& raw, int trim);
SkeletonSequence normalize_frames(const SkeletonSequence& seq, int reference_joint);
std::vector<SkeletonSequence> window_sequence(const SkeletonSequence& seq, int length);

/// trim -> normalize -> window over every sequence, in order. Sequences too
/// short to yield a window after trimming are rejected.
std::vector<SkeletonSequence> preprocess(const std::vector<SkeletonSequence>& raw, int trim, int reference_joint,
                                         int length);

enum class MotionModel { Gait, Linear };

struct SynthConfig {
  std::string layout = "kinect20";
  int num_identities = 5;
  int sequences_per_identity = 20;
  int test_sequences_per_identity = 0;
  int frames = 6;
  double noise = 0.005;      // std-dev of isotropic joint jitter
  double amplitude = 0.35;   // swing angle scale (rad) or drift speed scale
  double cycle_frames = 12;  // frames per gait cycle at frequency 1
  MotionModel motion = MotionModel::Gait;
};

/// Deterministic synthetic walkers: each identity owns limb lengths and a
/// sinusoid (phase, amplitude, frequency) per limb, plus Gaussian jitter.
/// MotionModel::Linear replaces the swing by a per-joint constant velocity.
DatasetSplit generate_synthetic_gait(const SynthConfig& config, std::uint64_t seed);

struct SequenceFile {
  std::string layout;
  std::vector<SkeletonSequence> sequences;
};

/// Header `layout,<name>,joints,<J>` then one `seq_id,label,frame_index,x0,y0,z0,...`
/// record per frame. Values are printed with round-trip precision.
std::string format_sequence_file(const SequenceFile& file);
SequenceFile parse_sequence_file(const std::string& content);

/// Writes one sequence file per sequence plus `manifest.csv` into `dir`;
/// returns the manifest path.
std::string save_dataset(const DatasetSplit& data, const std::string& dir);
DatasetSplit load_dataset(const std::string& manifest_path);

}  // namespace skelgraph

#endif  // SKELGRAPH_SKELETON_HPP
