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

#include "skelgraph/checkpoint.hpp"

#include <bit>

#include "skelgraph/text.hpp"

namespace skelgraph {

namespace {

constexpr char kMagic[4] = {'S', 'K', 'G', 'C'};

class Writer {
 public:
  void bytes(const char* data, std::size_t n) { out_.append(data, n); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { little(v, 4); }
  void u64(std::uint64_t v) { little(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void matrix_values(const MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
  }
  std::string take() { return std::move(out_); }

 private:
  void little(std::uint64_t v, int n) {
    for (int k = 0; k < n; ++k) out_.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& data) : data_(data) {}
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(little(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(little(4)); }
  std::uint64_t u64() { return little(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  void matrix_values(MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = f64();
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    require(n <= data_.size() - pos_, ErrorCode::ParseError, "checkpoint is truncated");
  }
  std::uint64_t little(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int k = 0; k < n; ++k) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + k])) << (8 * k);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  const std::string& data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kCheckpointVersion);
  std::string meta;
  for (const auto& [key, value] : checkpoint.metadata) {
    require(!key.empty() && key.find_first_of("=\n") == std::string::npos && value.find('\n') == std::string::npos,
            ErrorCode::InvalidConfig, "metadata entries must be single-line key=value pairs: " + key);
    meta += key + "=" + value + "\n";
  }
  w.u64(meta.size());
  w.bytes(meta.data(), meta.size());
  const ParameterStore& store = checkpoint.parameters;
  w.u64(store.size());
  for (const auto& e : store.entries()) {
    w.u32(static_cast<std::uint32_t>(e.name.size()));
    w.bytes(e.name.data(), e.name.size());
    w.u32(2);
    w.u64(static_cast<std::uint64_t>(e.value.rows()));
    w.u64(static_cast<std::uint64_t>(e.value.cols()));
    w.matrix_values(e.value);
  }
  w.u8(checkpoint.optimizer ? 1 : 0);
  if (checkpoint.optimizer) {
    const AdamState& s = *checkpoint.optimizer;
    require(s.first.size() == store.size() && s.second.size() == store.size(), ErrorCode::DimensionMismatch,
            "optimizer state does not match the parameter store");
    w.u64(static_cast<std::uint64_t>(s.step));
    w.f64(s.config.lr);
    w.f64(s.config.beta1);
    w.f64(s.config.beta2);
    w.f64(s.config.epsilon);
    for (const auto& m : s.first) w.matrix_values(m);
    for (const auto& v : s.second) w.matrix_values(v);
  }
  return w.take();
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  require(r.bytes(4) == std::string(kMagic, 4), ErrorCode::ParseError, "not a checkpoint file");
  const std::uint32_t version = r.u32();
  require(version == kCheckpointVersion, ErrorCode::VersionMismatch,
          "checkpoint version " + std::to_string(version) + ", expected " + std::to_string(kCheckpointVersion));
  Checkpoint out;
  const std::string meta = r.bytes(r.u64());
  std::size_t start = 0;
  while (start < meta.size()) {
    const std::size_t stop = meta.find('\n', start);
    require(stop != std::string::npos, ErrorCode::ParseError, "metadata block must end with a newline");
    const std::string line = meta.substr(start, stop - start);
    start = stop + 1;
    const auto eq = line.find('=');
    require(eq != std::string::npos && eq > 0, ErrorCode::ParseError, "bad metadata line: " + line);
    out.metadata[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const std::uint64_t count = r.u64();
  for (std::uint64_t k = 0; k < count; ++k) {
    std::string name = r.bytes(r.u32());
    const std::uint32_t rank = r.u32();
    require(rank == 2, ErrorCode::ParseError, "parameter " + name + " has unsupported rank " + std::to_string(rank));
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    require(rows < (1u << 24) && cols < (1u << 24), ErrorCode::ParseError, "parameter " + name + " is implausibly large");
    MatrixXd value(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    r.matrix_values(value);
    out.parameters.add(name, std::move(value));
  }
  if (r.u8() != 0) {
    AdamState s;
    s.step = static_cast<std::int64_t>(r.u64());
    s.config.lr = r.f64();
    s.config.beta1 = r.f64();
    s.config.beta2 = r.f64();
    s.config.epsilon = r.f64();
    s.first = out.parameters.zero_gradients();
    s.second = out.parameters.zero_gradients();
    for (auto& m : s.first) r.matrix_values(m);
    for (auto& v : s.second) r.matrix_values(v);
    out.optimizer = std::move(s);
  }
  require(r.done(), ErrorCode::ParseError, "trailing bytes after checkpoint");
  return out;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  text::write_file(path, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::string& path) { return deserialize_checkpoint(text::read_file(path)); }

}  // namespace skelgraph
