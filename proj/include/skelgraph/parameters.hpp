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

#ifndef SKELGRAPH_PARAMETERS_HPP
#define SKELGRAPH_PARAMETERS_HPP

#include <map>
#include <string>
#include <vector>

#include "skelgraph/common.hpp"

namespace skelgraph {

struct ParameterEntry {
  std::string name;
  MatrixXd value;
  MatrixXd grad;  // same shape as value
};

/// Gradient buffer aligned with a store's entries.
using GradientList = std::vector<MatrixXd>;

/// Registry of every trainable array, in registration order.
class ParameterStore {
 public:
  ParameterEntry& add(const std::string& name, MatrixXd value);

  std::size_t size() const { return entries_.size(); }
  ParameterEntry& operator[](std::size_t k) { return entries_[k]; }
  const ParameterEntry& operator[](std::size_t k) const { return entries_[k]; }
  std::vector<ParameterEntry>& entries() { return entries_; }
  const std::vector<ParameterEntry>& entries() const { return entries_; }

  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t index_of(const std::string& name) const;
  ParameterEntry& at(const std::string& name) { return entries_[index_of(name)]; }
  const ParameterEntry& at(const std::string& name) const { return entries_[index_of(name)]; }

  void zero_grad();
  GradientList zero_gradients() const;
  void set_gradients(const GradientList& grads);
  GradientList gradients() const;

  /// Sum of squared entries over every registered parameter.
  double squared_norm() const;
  std::size_t scalar_count() const;

 private:
  std::vector<ParameterEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace skelgraph

#endif  // SKELGRAPH_PARAMETERS_HPP
