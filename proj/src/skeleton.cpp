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

#include "skelgraph/skeleton.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include <Eigen/Geometry>

#include "skelgraph/random.hpp"
#include "skelgraph/text.hpp"

namespace skelgraph {

void validate_sequence(const SkeletonSequence& seq, int joint_count) {
  require(seq.length() >= 1, ErrorCode::SequenceTooShort, "sequence " + seq.source_id + " has no frames");
  for (const auto& frame : seq.frames) {
    require(frame.rows() == joint_count && frame.cols() == kJointDim, ErrorCode::LayoutMismatch,
            "sequence " + seq.source_id + " frame is " + shape_of(frame) + ", expected " +
                shape_string(joint_count, kJointDim));
    require(frame.allFinite(), ErrorCode::ParseError, "sequence " + seq.source_id + " has non-finite coordinates");
  }
}

void validate_dataset(const DatasetSplit& data) {
  const Layout& layout = bundled_layout(data.layout);
  require(!data.train.empty(), ErrorCode::InvalidConfig, "training split is empty");
  require(data.num_classes >= 1, ErrorCode::InvalidConfig, "dataset needs at least one class");
  for (const auto* split : {&data.train, &data.test})
    for (const auto& seq : *split) {
      validate_sequence(seq, layout.joint_count());
      require(seq.label >= 1 && seq.label <= data.num_classes, ErrorCode::InvalidLabel,
              "sequence " + seq.source_id + " has label " + std::to_string(seq.label) + " outside 1.." +
                  std::to_string(data.num_classes));
    }
}

SkeletonSequence trim_sequence(const SkeletonSequence& raw, int trim) {
  require(trim >= 0, ErrorCode::InvalidConfig, "trim must be non-negative");
  require(raw.length() > 2 * trim, ErrorCode::SequenceTooShort,
          "sequence " + raw.source_id + " has " + std::to_string(raw.length()) + " frames, cannot trim " +
              std::to_string(trim) + " from both ends");
  SkeletonSequence out;
  out.label = raw.label;
  out.source_id = raw.source_id;
  out.frames.assign(raw.frames.begin() + trim, raw.frames.end() - trim);
  return out;
}

SkeletonSequence normalize_frames(const SkeletonSequence& seq, int reference_joint) {
  SkeletonSequence out = seq;
  for (auto& frame : out.frames) {
    require(reference_joint >= 0 && reference_joint < frame.rows(), ErrorCode::IndexOutOfRange,
            "reference joint " + std::to_string(reference_joint) + " outside 0.." + std::to_string(frame.rows() - 1));
    const Eigen::RowVector3d origin = frame.row(reference_joint);
    frame.rowwise() -= origin;
  }
  return out;
}

std::vector<SkeletonSequence> window_sequence(const SkeletonSequence& seq, int length) {
  require(length >= 2 && length % 2 == 0, ErrorCode::InvalidConfig,
          "window length must be even and at least 2, got " + std::to_string(length));
  require(seq.length() >= length, ErrorCode::SequenceTooShort,
          "sequence " + seq.source_id + " has " + std::to_string(seq.length()) + " frames, window needs " +
              std::to_string(length));
  const int stride = length / 2;
  std::vector<SkeletonSequence> windows;
  for (int start = 0; start + length <= seq.length(); start += stride) {
    SkeletonSequence w;
    w.label = seq.label;
    w.source_id = seq.source_id + "@" + std::to_string(start);
    w.frames.assign(seq.frames.begin() + start, seq.frames.begin() + start + length);
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<SkeletonSequence> preprocess(const std::vector<SkeletonSequence>& raw, int trim, int reference_joint,
                                         int length) {
  std::vector<SkeletonSequence> out;
  for (const auto& seq : raw) {
    auto windows = window_sequence(normalize_frames(trim_sequence(seq, trim), reference_joint), length);
    for (auto& w : windows) out.push_back(std::move(w));
  }
  return out;
}

namespace {

struct BodyModel {
  IndexList order;   // breadth-first from the root
  IndexList parent;  // -1 for the root
};

BodyModel body_tree(const Layout& layout) {
  const int joints = layout.joint_count();
  std::vector<IndexList> adjacent(joints);
  for (const auto& [a, b] : layout.level_edges(1)) {
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  }
  BodyModel body;
  body.parent.assign(joints, -2);
  body.parent[layout.reference_joint] = -1;
  body.order.push_back(layout.reference_joint);
  for (std::size_t k = 0; k < body.order.size(); ++k)
    for (int next : adjacent[body.order[k]])
      if (body.parent[next] == -2) {
        body.parent[next] = body.order[k];
        body.order.push_back(next);
      }
  return body;
}

struct IdentityParams {
  std::vector<double> bone_scale;
  std::vector<double> phase;
  std::vector<double> swing;
  std::vector<Eigen::Vector3d> axis;
  std::vector<Eigen::Vector3d> velocity;
  double frequency = 1.0;
};

IdentityParams draw_identity(Rng& rng, int joints, const SynthConfig& config) {
  IdentityParams p;
  const double height = rng.uniform(0.85, 1.15);
  p.frequency = rng.uniform(0.8, 1.25);
  for (int j = 0; j < joints; ++j) {
    p.bone_scale.push_back(height * rng.uniform(0.8, 1.2));
    p.phase.push_back(rng.uniform(0.0, 2.0 * M_PI));
    p.swing.push_back(config.amplitude * rng.uniform(0.5, 1.5));
    Eigen::Vector3d axis(1.0, rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
    p.axis.push_back(axis.normalized());
    Eigen::Vector3d v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    p.velocity.push_back(0.02 * config.amplitude * v);
  }
  return p;
}

SkeletonFrame pose_at(const Layout& layout, const BodyModel& body, const IdentityParams& p, const SynthConfig& config,
                      double t) {
  const int joints = layout.joint_count();
  SkeletonFrame frame(joints, kJointDim);
  const int root = body.order.front();
  frame.row(root) = layout.joints[root].rest.transpose();
  const double omega = 2.0 * M_PI * p.frequency / config.cycle_frames;
  for (std::size_t k = 1; k < body.order.size(); ++k) {
    const int j = body.order[k];
    const int up = body.parent[j];
    Eigen::Vector3d bone = p.bone_scale[j] * (layout.joints[j].rest - layout.joints[up].rest);
    if (config.motion == MotionModel::Gait) {
      const double angle = p.swing[j] * std::sin(omega * t + p.phase[j]);
      bone = Eigen::AngleAxisd(angle, p.axis[j]) * bone;
    }
    frame.row(j) = frame.row(up) + bone.transpose();
  }
  if (config.motion == MotionModel::Linear)
    for (int j = 0; j < joints; ++j) frame.row(j) += t * p.velocity[j].transpose();
  return frame;
}

}  // namespace

DatasetSplit generate_synthetic_gait(const SynthConfig& config, std::uint64_t seed) {
  require(config.num_identities > 0, ErrorCode::InvalidConfig, "num_identities must be positive");
  require(config.sequences_per_identity > 0, ErrorCode::InvalidConfig, "sequences_per_identity must be positive");
  require(config.test_sequences_per_identity >= 0, ErrorCode::InvalidConfig,
          "test_sequences_per_identity must be non-negative");
  require(config.frames > 0, ErrorCode::InvalidConfig, "frames must be positive");
  require(config.noise >= 0 && config.amplitude >= 0 && config.cycle_frames > 0, ErrorCode::InvalidConfig,
          "noise and amplitude must be non-negative, cycle_frames positive");
  const Layout& layout = bundled_layout(config.layout);
  const BodyModel body = body_tree(layout);

  DatasetSplit data;
  data.layout = layout.name;
  data.num_classes = config.num_identities;
  Rng master(seed);
  for (int id = 0; id < config.num_identities; ++id) {
    Rng rng = master.split();
    const IdentityParams params = draw_identity(rng, layout.joint_count(), config);
    const int total = config.sequences_per_identity + config.test_sequences_per_identity;
    for (int s = 0; s < total; ++s) {
      SkeletonSequence seq;
      seq.label = id + 1;
      seq.source_id = "synth/id" + std::to_string(id + 1) + "/seq" + std::to_string(s);
      const double start = rng.uniform(0.0, config.cycle_frames);
      for (int t = 0; t < config.frames; ++t) {
        SkeletonFrame frame = pose_at(layout, body, params, config, start + t);
        if (config.noise > 0)
          for (Eigen::Index k = 0; k < frame.size(); ++k) frame.data()[k] += config.noise * rng.normal();
        seq.frames.push_back(std::move(frame));
      }
      (s < config.sequences_per_identity ? data.train : data.test).push_back(std::move(seq));
    }
  }
  return data;
}

std::string format_sequence_file(const SequenceFile& file) {
  std::ostringstream out;
  const int joints = file.sequences.empty() ? 0 : file.sequences.front().joint_count();
  out << "layout," << file.layout << ",joints," << joints << "\n";
  for (std::size_t s = 0; s < file.sequences.size(); ++s) {
    const auto& seq = file.sequences[s];
    require(seq.joint_count() == joints, ErrorCode::LayoutMismatch, "sequences in one file must share J");
    const std::string id = seq.source_id.empty() ? std::to_string(s) : seq.source_id;
    require(id.find(',') == std::string::npos, ErrorCode::InvalidConfig, "sequence id may not contain commas");
    for (int t = 0; t < seq.length(); ++t) {
      out << id << ',' << (seq.label > 0 ? std::to_string(seq.label) : std::string()) << ',' << t;
      const auto& frame = seq.frames[t];
      for (Eigen::Index j = 0; j < frame.rows(); ++j)
        for (int d = 0; d < kJointDim; ++d) out << ',' << text::format_double(frame(j, d));
      out << '\n';
    }
  }
  return out.str();
}

SequenceFile parse_sequence_file(const std::string& content) {
  const auto rows = text::csv_rows(content);
  require(!rows.empty() && rows[0].size() == 4 && rows[0][0] == "layout" && rows[0][2] == "joints",
          ErrorCode::ParseError, "sequence file must start with 'layout,<name>,joints,<J>'");
  SequenceFile file;
  file.layout = rows[0][1];
  const int joints = text::to_int(rows[0][3], "joint count");
  require(joints > 0, ErrorCode::ParseError, "joint count must be positive");
  const std::size_t width = 3 + static_cast<std::size_t>(joints) * kJointDim;
  std::map<std::string, std::size_t> index_of;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    require(row.size() == width, ErrorCode::ParseError,
            "record " + std::to_string(r) + " has " + std::to_string(row.size()) + " fields, expected " +
                std::to_string(width));
    auto [it, inserted] = index_of.emplace(row[0], file.sequences.size());
    if (inserted) {
      SkeletonSequence seq;
      seq.source_id = row[0];
      seq.label = row[1].empty() ? 0 : text::to_int(row[1], "label");
      file.sequences.push_back(std::move(seq));
    }
    SkeletonSequence& seq = file.sequences[it->second];
    require((row[1].empty() ? 0 : text::to_int(row[1], "label")) == seq.label, ErrorCode::ParseError,
            "sequence " + row[0] + " changes label mid-sequence");
    require(text::to_int(row[2], "frame index") == seq.length(), ErrorCode::ParseError,
            "sequence " + row[0] + " frame indices must run 0,1,2,...");
    SkeletonFrame frame(joints, kJointDim);
    for (int j = 0; j < joints; ++j)
      for (int d = 0; d < kJointDim; ++d) frame(j, d) = text::to_double(row[3 + j * kJointDim + d], "coordinate");
    seq.frames.push_back(std::move(frame));
  }
  for (const auto& seq : file.sequences) validate_sequence(seq, joints);
  return file;
}

std::string save_dataset(const DatasetSplit& data, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  manifest << "# skeleton dataset manifest\n";
  manifest << "layout," << data.layout << "\n";
  manifest << "num_classes," << data.num_classes << "\n";
  int counter = 0;
  for (const auto& [split, sequences] : {std::pair{"train", &data.train}, std::pair{"test", &data.test}}) {
    for (const auto& seq : *sequences) {
      char name[32];
      std::snprintf(name, sizeof(name), "seq_%05d.csv", counter++);
      SequenceFile file{data.layout, {seq}};
      text::write_file(dir + "/" + name, format_sequence_file(file));
      manifest << split << ',' << name << "\n";
    }
  }
  const std::string path = dir + "/manifest.csv";
  text::write_file(path, manifest.str());
  return path;
}

DatasetSplit load_dataset(const std::string& manifest_path) {
  const std::string base = std::filesystem::path(manifest_path).parent_path().string();
  DatasetSplit data;
  for (const auto& row : text::csv_rows(text::read_file(manifest_path))) {
    require(row.size() == 2, ErrorCode::ParseError, "manifest rows have two fields");
    if (row[0] == "layout") {
      data.layout = row[1];
    } else if (row[0] == "num_classes") {
      data.num_classes = text::to_int(row[1], "num_classes");
    } else if (row[0] == "train" || row[0] == "test") {
      SequenceFile file = parse_sequence_file(text::read_file(base.empty() ? row[1] : base + "/" + row[1]));
      require(file.layout == data.layout, ErrorCode::LayoutMismatch,
              row[1] + " uses layout " + file.layout + ", manifest says " + data.layout);
      auto& target = row[0] == "train" ? data.train : data.test;
      for (auto& seq : file.sequences) target.push_back(std::move(seq));
    } else {
      throw Error(ErrorCode::ParseError, "unknown manifest row '" + row[0] + "'");
    }
  }
  validate_dataset(data);
  return data;
}

}  // namespace skelgraph
