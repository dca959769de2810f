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

// Dense matrix primitives shared by the plain forward path and the autodiff
// tape. Batched "block" kernels treat a tall matrix as B stacked per-frame
// blocks so a whole batch of skeleton graphs runs through one call.

#ifndef SKELGRAPH_KERNELS_HPP
#define SKELGRAPH_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "skelgraph/common.hpp"

namespace skelgraph {

namespace detail {

inline void check(bool ok, const std::string& what) {
  require(ok, ErrorCode::DimensionMismatch, what);
}

}  // namespace detail

template <class S>
Mat<S> matmul(const Mat<S>& a, const Mat<S>& b) {
  detail::check(a.cols() == b.rows(), "matmul " + shape_of(a) + " * " + shape_of(b));
  return a * b;
}

/// a * b^T
template <class S>
Mat<S> matmul_nt(const Mat<S>& a, const Mat<S>& b) {
  detail::check(a.cols() == b.cols(), "matmul_nt " + shape_of(a) + " * " + shape_of(b) + "^T");
  return a * b.transpose();
}

template <class S>
Mat<S> add(const Mat<S>& a, const Mat<S>& b) {
  detail::check(a.rows() == b.rows() && a.cols() == b.cols(), "add " + shape_of(a) + " + " + shape_of(b));
  return a + b;
}

template <class S>
Mat<S> sub(const Mat<S>& a, const Mat<S>& b) {
  detail::check(a.rows() == b.rows() && a.cols() == b.cols(), "sub " + shape_of(a) + " - " + shape_of(b));
  return a - b;
}

template <class S>
Mat<S> hadamard(const Mat<S>& a, const Mat<S>& b) {
  detail::check(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard " + shape_of(a) + " . " + shape_of(b));
  return a.cwiseProduct(b);
}

template <class S>
Mat<S> scale(const Mat<S>& a, S factor) {
  return a * factor;
}

/// Adds the 1 x c row vector `bias` to every row of `a`.
template <class S>
Mat<S> add_bias(const Mat<S>& a, const Mat<S>& bias) {
  detail::check(bias.rows() == 1 && bias.cols() == a.cols(), "add_bias " + shape_of(a) + " + " + shape_of(bias));
  return a.rowwise() + bias.row(0);
}

namespace detail {

/// 1 where x > 0, else 0, without data-dependent branches.
template <class S>
Mat<S> positive_step(const Mat<S>& x) {
  return ((x.array().sign() + S(1)) * S(0.5)).floor().matrix();
}

// Row reductions as column sweeps, which vectorize on column-major storage.
template <class S>
Vec<S> row_max(const Mat<S>& x) {
  Vec<S> out = x.col(0);
  for (Eigen::Index j = 1; j < x.cols(); ++j) out = out.cwiseMax(x.col(j));
  return out;
}

template <class S>
Vec<S> row_sum(const Mat<S>& x) {
  Vec<S> out = x.col(0);
  for (Eigen::Index j = 1; j < x.cols(); ++j) out += x.col(j);
  return out;
}

/// Stacks `frames` copies of x vertically.
template <class S>
Mat<S> tile_rows(const Mat<S>& x, Eigen::Index frames) {
  Mat<S> out(x.rows() * frames, x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index f = 0; f < frames; ++f) out.col(j).segment(f * x.rows(), x.rows()) = x.col(j);
  return out;
}

template <class S>
void divide_rows(Mat<S>& x, const Vec<S>& by) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j).array() /= by.array();
}

}  // namespace detail

template <class S>
Mat<S> leaky_relu(const Mat<S>& a, S slope) {
  return a.cwiseMax(S(0)) + slope * a.cwiseMin(S(0));
}

template <class S>
Mat<S> elu(const Mat<S>& a) {
  return (a.array().max(S(0)) + a.array().min(S(0)).exp() - S(1)).matrix();
}

template <class S>
Mat<S> relu(const Mat<S>& a) {
  return a.cwiseMax(S(0));
}

template <class S>
Mat<S> sigmoid(const Mat<S>& a) {
  // exp(-x) overflows to inf for very negative x, which still yields 0.
  return (S(1) + (-a.array()).exp()).inverse().matrix();
}

template <class S>
Mat<S> tanh(const Mat<S>& a) {
  return a.unaryExpr([](S x) { return std::tanh(x); });
}

template <class S>
Mat<S> col_block(const Mat<S>& a, int start, int count) {
  detail::check(start >= 0 && count >= 0 && start + count <= a.cols(), "col_block out of range");
  return a.middleCols(start, count);
}

template <class S>
Mat<S> row_block(const Mat<S>& a, int start, int count) {
  detail::check(start >= 0 && count >= 0 && start + count <= a.rows(), "row_block out of range");
  return a.middleRows(start, count);
}

/// For column vectors a, b of B*n entries: row (b,i), column j holds
/// a[b*n+i] + bvec[b*n+j]. Produces the pairwise score table of each frame.
template <class S>
Mat<S> outer_sum(const Mat<S>& a, const Mat<S>& b, int n) {
  detail::check(a.cols() == 1 && b.cols() == 1 && a.rows() == b.rows() && n > 0 && a.rows() % n == 0,
                "outer_sum " + shape_of(a) + ", " + shape_of(b));
  const Eigen::Index frames = a.rows() / n;
  Mat<S> out(a.rows(), n);
  for (int j = 0; j < n; ++j)
    for (Eigen::Index f = 0; f < frames; ++f)
      out.col(j).segment(f * n, n) = a.col(0).segment(f * n, n).array() + b(f * n + j, 0);
  return out;
}

/// Row-wise softmax restricted to the support of `mask`. Row r of `logits`
/// uses mask row r % n (n = mask.rows()); entries off the mask are exactly 0.
template <class S>
Mat<S> masked_softmax_rows(const Mat<S>& logits, const BoolMatrix& mask) {
  const Eigen::Index n = mask.rows();
  detail::check(n > 0 && mask.cols() == n && logits.cols() == n && logits.rows() % n == 0,
                "masked_softmax_rows " + shape_of(logits) + " with mask " + shape_of(mask));
  for (Eigen::Index i = 0; i < n; ++i)
    require(mask.row(i).any(), ErrorCode::EmptyNeighborhood, "neighbor mask row " + std::to_string(i) + " is empty");
  const Eigen::Index frames = logits.rows() / n;
  const Mat<S> block = mask.template cast<S>();
  const Mat<S> keep = detail::tile_rows(block, frames);
  const Mat<S> masked =
      logits + detail::tile_rows(Mat<S>((S(1) - block.array()) * -std::numeric_limits<S>::max()), frames);
  const Vec<S> peak = detail::row_max(masked);
  Mat<S> out(logits.rows(), n);
  // Off-support exponents are zeroed before exp and the result multiplied
  // by 0, so those entries are exactly zero without denormal arithmetic.
  for (Eigen::Index j = 0; j < n; ++j)
    out.col(j) = (((logits.col(j) - peak).array() * keep.col(j).array()).exp() * keep.col(j).array()).matrix();
  detail::divide_rows(out, detail::row_sum(out));
  return out;
}

template <class S>
Mat<S> softmax_rows(const Mat<S>& logits) {
  const Vec<S> peak = detail::row_max(logits);
  Mat<S> out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) out.col(j) = (logits.col(j) - peak).array().exp().matrix();
  detail::divide_rows(out, detail::row_sum(out));
  return out;
}

/// Per-frame product W_b * V_b for W (B*r x c) and V (B*c x d).
template <class S>
Mat<S> block_aggregate(const Mat<S>& weights, const Mat<S>& values) {
  const Eigen::Index c = weights.cols();
  detail::check(c > 0 && values.rows() % c == 0, "block_aggregate " + shape_of(weights) + ", " + shape_of(values));
  const Eigen::Index frames = values.rows() / c;
  detail::check(frames > 0 && weights.rows() % frames == 0,
                "block_aggregate " + shape_of(weights) + ", " + shape_of(values));
  const Eigen::Index r = weights.rows() / frames;
  Mat<S> out(weights.rows(), values.cols());
  for (Eigen::Index f = 0; f < frames; ++f)
    out.middleRows(f * r, r).noalias() = weights.middleRows(f * r, r) * values.middleRows(f * c, c);
  return out;
}

/// Per-frame Gram block U_b * L_b^T for U (B*r x d) and L (B*c x d).
template <class S>
Mat<S> block_gram(const Mat<S>& upper, const Mat<S>& lower, int lower_nodes) {
  const Eigen::Index c = lower_nodes;
  detail::check(c > 0 && lower.rows() % c == 0 && upper.cols() == lower.cols(),
                "block_gram " + shape_of(upper) + ", " + shape_of(lower));
  const Eigen::Index frames = lower.rows() / c;
  detail::check(frames > 0 && upper.rows() % frames == 0, "block_gram " + shape_of(upper) + ", " + shape_of(lower));
  const Eigen::Index r = upper.rows() / frames;
  Mat<S> out(upper.rows(), c);
  for (Eigen::Index f = 0; f < frames; ++f)
    out.middleRows(f * r, r).noalias() = upper.middleRows(f * r, r) * lower.middleRows(f * c, c).transpose();
  return out;
}

/// Per-frame P * X_b for a fixed pooling matrix P (r x c) and X (B*c x d).
template <class S>
Mat<S> block_pool(const Mat<S>& pool, const Mat<S>& x) {
  const Eigen::Index r = pool.rows(), c = pool.cols();
  detail::check(c > 0 && x.rows() % c == 0, "block_pool " + shape_of(pool) + ", " + shape_of(x));
  const Eigen::Index frames = x.rows() / c;
  Mat<S> out(frames * r, x.cols());
  for (Eigen::Index f = 0; f < frames; ++f) out.middleRows(f * r, r).noalias() = pool * x.middleRows(f * c, c);
  return out;
}

template <class S>
Mat<S> gather_rows(const Mat<S>& x, const IndexList& rows) {
  Mat<S> out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    detail::check(rows[k] >= 0 && rows[k] < x.rows(), "gather_rows index out of range");
    out.row(static_cast<Eigen::Index>(k)) = x.row(rows[k]);
  }
  return out;
}

/// Row-major regrouping: consecutive `group` rows of x become one output row.
template <class S>
Mat<S> reshape_rows(const Mat<S>& x, int group) {
  detail::check(group > 0 && x.rows() % group == 0, "reshape_rows " + shape_of(x) + " by " + std::to_string(group));
  const Eigen::Index out_rows = x.rows() / group, d = x.cols();
  Mat<S> out(out_rows, group * d);
  for (Eigen::Index r = 0; r < out_rows; ++r)
    for (int g = 0; g < group; ++g) out.block(r, g * d, 1, d) = x.row(r * group + g);
  return out;
}

template <class S>
Mat<S> mean_of(const std::vector<Mat<S>>& terms) {
  detail::check(!terms.empty(), "mean_of needs at least one term");
  Mat<S> out = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) out = add(out, terms[k]);
  return out / static_cast<S>(terms.size());
}

template <class S>
Mat<S> sum_all(const Mat<S>& a) {
  Mat<S> out(1, 1);
  out(0, 0) = a.sum();
  return out;
}

template <class S>
Mat<S> squared_norm(const Mat<S>& a) {
  Mat<S> out(1, 1);
  out(0, 0) = a.squaredNorm();
  return out;
}

/// Picks x(i, cols[i]) into an N x 1 column.
template <class S>
Mat<S> pick(const Mat<S>& x, const IndexList& cols) {
  detail::check(static_cast<Eigen::Index>(cols.size()) == x.rows(), "pick needs one column per row");
  Mat<S> out(x.rows(), 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    detail::check(cols[i] >= 0 && cols[i] < x.cols(), "pick column out of range");
    out(i, 0) = x(i, cols[i]);
  }
  return out;
}

template <class S>
Mat<S> log_floor(const Mat<S>& a, S floor) {
  return a.unaryExpr([floor](S x) { return std::log(std::max(x, floor)); });
}

template <class S>
S scalar_value(const Mat<S>& a) {
  detail::check(a.rows() == 1 && a.cols() == 1, "scalar_value on " + shape_of(a));
  return a(0, 0);
}

template <class S>
const Mat<S>& value_of(const Mat<S>& a) {
  return a;
}

}  // namespace skelgraph

#endif  // SKELGRAPH_KERNELS_HPP
