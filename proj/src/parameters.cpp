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

#include "skelgraph/parameters.hpp"

namespace skelgraph {

ParameterEntry& ParameterStore::add(const std::string& name, MatrixXd value) {
  require(!name.empty(), ErrorCode::InvalidConfig, "parameter name must not be empty");
  require(index_.count(name) == 0, ErrorCode::InvalidConfig, "duplicate parameter name " + name);
  index_.emplace(name, entries_.size());
  MatrixXd grad = MatrixXd::Zero(value.rows(), value.cols());
  entries_.push_back({name, std::move(value), std::move(grad)});
  return entries_.back();
}

std::size_t ParameterStore::index_of(const std::string& name) const {
  auto it = index_.find(name);
  require(it != index_.end(), ErrorCode::InvalidConfig, "no parameter named " + name);
  return it->second;
}

void ParameterStore::zero_grad() {
  for (auto& e : entries_) e.grad.setZero();
}

GradientList ParameterStore::zero_gradients() const {
  GradientList grads;
  grads.reserve(entries_.size());
  for (const auto& e : entries_) grads.push_back(MatrixXd::Zero(e.value.rows(), e.value.cols()));
  return grads;
}

void ParameterStore::set_gradients(const GradientList& grads) {
  require(grads.size() == entries_.size(), ErrorCode::DimensionMismatch, "gradient list does not match the store");
  for (std::size_t k = 0; k < grads.size(); ++k) {
    require(grads[k].rows() == entries_[k].value.rows() && grads[k].cols() == entries_[k].value.cols(),
            ErrorCode::DimensionMismatch, "gradient shape mismatch for " + entries_[k].name);
    entries_[k].grad = grads[k];
  }
}

GradientList ParameterStore::gradients() const {
  GradientList grads;
  grads.reserve(entries_.size());
  for (const auto& e : entries_) grads.push_back(e.grad);
  return grads;
}

double ParameterStore::squared_norm() const {
  double total = 0;
  for (const auto& e : entries_) total += e.value.squaredNorm();
  return total;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t count = 0;
  for (const auto& e : entries_) count += static_cast<std::size_t>(e.value.size());
  return count;
}

}  // namespace skelgraph
