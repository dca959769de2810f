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

// Matrix-valued reverse-mode differentiation. A Tape records every operation
// applied to Var handles; backward() sweeps the record in reverse and pushes
// adjoints into parameter gradient sinks. Var overloads carry the same names
// as the dense kernels so model code is written once for both paths.

#ifndef SKELGRAPH_AUTODIFF_HPP
#define SKELGRAPH_AUTODIFF_HPP

#include <functional>
#include <utility>
#include <vector>

#include "skelgraph/kernels.hpp"

namespace skelgraph {

template <class S>
class Tape;

template <class S>
class Var {
 public:
  using Scalar = S;

  Var() = default;
  Var(Tape<S>* tape, int id) : tape_(tape), id_(id) {}

  bool valid() const { return tape_ != nullptr && id_ >= 0; }
  Tape<S>* tape() const { return tape_; }
  int id() const { return id_; }
  const Mat<S>& value() const { return tape_->value(id_); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }

 private:
  Tape<S>* tape_ = nullptr;
  int id_ = -1;
};

template <class S>
class Tape {
 public:
  /// Receives the adjoint of the node's output and distributes it to parents.
  using Backward = std::function<void(Tape&, const Mat<S>&)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<S> constant(Mat<S> value) { return push(std::move(value), false, {}, nullptr); }

  /// A leaf whose adjoint can be read back with grad() after backward().
  Var<S> variable(Mat<S> value) { return push(std::move(value), true, {}, nullptr); }

  /// A leaf bound to an external gradient slot; backward() adds into `sink`,
  /// which must already have the value's shape.
  Var<S> parameter(const Mat<S>& value, Mat<S>* sink) {
    detail::check(sink != nullptr && sink->rows() == value.rows() && sink->cols() == value.cols(),
                  "parameter gradient sink shape");
    return push(value, true, {}, sink);
  }

  Var<S> record(Mat<S> value, std::initializer_list<Var<S>> parents, Backward backward) {
    bool needs = false;
    for (const Var<S>& p : parents) {
      detail::check(p.tape() == this, "operands recorded on different tapes");
      needs = needs || nodes_[p.id()].needs_grad;
    }
    return push(std::move(value), needs, needs ? std::move(backward) : Backward{}, nullptr);
  }

  Var<S> record(Mat<S> value, const std::vector<Var<S>>& parents, Backward backward) {
    bool needs = false;
    for (const Var<S>& p : parents) {
      detail::check(p.tape() == this, "operands recorded on different tapes");
      needs = needs || nodes_[p.id()].needs_grad;
    }
    return push(std::move(value), needs, needs ? std::move(backward) : Backward{}, nullptr);
  }

  const Mat<S>& value(int id) const { return nodes_[id].value; }

  /// Adjoint of a node after backward(); zeros when nothing reached it.
  Mat<S> grad(const Var<S>& v) const {
    const Node& node = nodes_[v.id()];
    if (node.grad.size() == 0) return Mat<S>::Zero(node.value.rows(), node.value.cols());
    return node.grad;
  }

  bool needs_grad(int id) const { return nodes_[id].needs_grad; }

  template <class Expr>
  void accumulate(int id, const Expr& g) {
    Node& node = nodes_[id];
    if (!node.needs_grad) return;
    if (node.grad.size() == 0)
      node.grad = g;
    else
      node.grad += g;
  }

  void backward(const Var<S>& loss) {
    require(loss.valid() && loss.tape() == this && loss.id() < static_cast<int>(nodes_.size()),
            ErrorCode::GraphNotRecorded, "backward() on a value that was not recorded on this tape");
    require(!swept_, ErrorCode::GraphNotRecorded, "tape already swept; record a fresh forward pass");
    detail::check(loss.rows() == 1 && loss.cols() == 1, "backward() needs a 1x1 loss, got " + shape_of(loss.value()));
    swept_ = true;
    accumulate(loss.id(), Mat<S>::Ones(1, 1));
    for (int id = loss.id(); id >= 0; --id) {
      Node& node = nodes_[id];
      if (node.grad.size() == 0) continue;
      if (node.backward) node.backward(*this, node.grad);
      if (node.sink != nullptr) *node.sink += node.grad;
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Mat<S> value;
    Mat<S> grad;
    Backward backward;
    Mat<S>* sink = nullptr;
    bool needs_grad = false;
  };

  Var<S> push(Mat<S> value, bool needs, Backward backward, Mat<S>* sink) {
    require(!swept_, ErrorCode::GraphNotRecorded, "cannot record onto a tape after backward()");
    nodes_.push_back(Node{std::move(value), Mat<S>{}, std::move(backward), sink, needs});
    return Var<S>(this, static_cast<int>(nodes_.size()) - 1);
  }

  std::vector<Node> nodes_;
  bool swept_ = false;
};

// Differentiable overloads. Each computes its value with the dense kernel and
// records the adjoint rule.

template <class S>
Var<S> matmul(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(matmul(a.value(), b.value()), {a, b}, [ia, ib](Tape<S>& t, const Mat<S>& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.needs_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

template <class S>
Var<S> matmul_nt(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(matmul_nt(a.value(), b.value()), {a, b}, [ia, ib](Tape<S>& t, const Mat<S>& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g * t.value(ib));
    if (t.needs_grad(ib)) t.accumulate(ib, g.transpose() * t.value(ia));
  });
}

template <class S>
Var<S> add(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(add(a.value(), b.value()), {a, b}, [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, g);
  });
}

template <class S>
Var<S> sub(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(sub(a.value(), b.value()), {a, b}, [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, -g);
  });
}

template <class S>
Var<S> sub(const Var<S>& a, const Mat<S>& b) {
  return sub(a, a.tape()->constant(b));
}

template <class S>
Var<S> hadamard(const Var<S>& a, const Var<S>& b) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(hadamard(a.value(), b.value()), {a, b}, [ia, ib](Tape<S>& t, const Mat<S>& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
    if (t.needs_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
  });
}

template <class S>
Var<S> scale(const Var<S>& a, S factor) {
  const int ia = a.id();
  return a.tape()->record(scale(a.value(), factor), {a},
                          [ia, factor](Tape<S>& t, const Mat<S>& g) { t.accumulate(ia, g * factor); });
}

template <class S>
Var<S> add_bias(const Var<S>& a, const Var<S>& bias) {
  const int ia = a.id(), ib = bias.id();
  return a.tape()->record(add_bias(a.value(), bias.value()), {a, bias}, [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g);
    if (t.needs_grad(ib)) t.accumulate(ib, g.colwise().sum());
  });
}

template <class S>
Var<S> leaky_relu(const Var<S>& a, S slope) {
  const int ia = a.id();
  return a.tape()->record(leaky_relu(a.value(), slope), {a}, [ia, slope](Tape<S>& t, const Mat<S>& g) {
    const Mat<S>& x = t.value(ia);
    t.accumulate(ia, (g.array() * (slope + (S(1) - slope) * detail::positive_step(x).array())).matrix());
  });
}

template <class S>
Var<S> elu(const Var<S>& a) {
  const int ia = a.id();
  return a.tape()->record(elu(a.value()), {a}, [ia](Tape<S>& t, const Mat<S>& g) {
    const Mat<S>& x = t.value(ia);
    t.accumulate(ia, (g.array() * x.array().min(S(0)).exp()).matrix());
  });
}

template <class S>
Var<S> relu(const Var<S>& a) {
  const int ia = a.id();
  return a.tape()->record(relu(a.value()), {a}, [ia](Tape<S>& t, const Mat<S>& g) {
    const Mat<S>& x = t.value(ia);
    t.accumulate(ia, g.cwiseProduct(detail::positive_step(x)));
  });
}

template <class S>
Var<S> sigmoid(const Var<S>& a) {
  const int ia = a.id();
  Mat<S> y = sigmoid(a.value());
  Mat<S> slope = y.cwiseProduct((Mat<S>::Ones(y.rows(), y.cols()) - y));
  return a.tape()->record(std::move(y), {a}, [ia, slope = std::move(slope)](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g.cwiseProduct(slope));
  });
}

template <class S>
Var<S> tanh(const Var<S>& a) {
  const int ia = a.id();
  Mat<S> y = tanh(a.value());
  Mat<S> slope = (Mat<S>::Ones(y.rows(), y.cols()) - y.cwiseProduct(y));
  return a.tape()->record(std::move(y), {a}, [ia, slope = std::move(slope)](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g.cwiseProduct(slope));
  });
}

template <class S>
Var<S> col_block(const Var<S>& a, int start, int count) {
  const int ia = a.id();
  return a.tape()->record(col_block(a.value(), start, count), {a}, [ia, start, count](Tape<S>& t, const Mat<S>& g) {
    Mat<S> full = Mat<S>::Zero(t.value(ia).rows(), t.value(ia).cols());
    full.middleCols(start, count) = g;
    t.accumulate(ia, full);
  });
}

template <class S>
Var<S> row_block(const Var<S>& a, int start, int count) {
  const int ia = a.id();
  return a.tape()->record(row_block(a.value(), start, count), {a}, [ia, start, count](Tape<S>& t, const Mat<S>& g) {
    Mat<S> full = Mat<S>::Zero(t.value(ia).rows(), t.value(ia).cols());
    full.middleRows(start, count) = g;
    t.accumulate(ia, full);
  });
}

template <class S>
Var<S> outer_sum(const Var<S>& a, const Var<S>& b, int n) {
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(outer_sum(a.value(), b.value(), n), {a, b}, [ia, ib, n](Tape<S>& t, const Mat<S>& g) {
    const Eigen::Index frames = g.rows() / n;
    if (t.needs_grad(ia)) t.accumulate(ia, detail::row_sum(g));
    if (t.needs_grad(ib)) {
      Mat<S> gb(g.rows(), 1);
      for (Eigen::Index f = 0; f < frames; ++f)
        gb.middleRows(f * n, n) = g.middleRows(f * n, n).colwise().sum().transpose();
      t.accumulate(ib, gb);
    }
  });
}

namespace detail {

// Shared adjoint of both softmax flavours: dx = y .* (g - rowsum(g .* y)).
template <class S>
Mat<S> softmax_adjoint(const Mat<S>& y, const Mat<S>& g) {
  const Vec<S> dots = row_sum(Mat<S>(g.cwiseProduct(y)));
  Mat<S> out(y.rows(), y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j) out.col(j) = y.col(j).cwiseProduct(g.col(j) - dots);
  return out;
}

}  // namespace detail

template <class S>
Var<S> masked_softmax_rows(const Var<S>& logits, const BoolMatrix& mask) {
  const int ia = logits.id();
  Mat<S> y = masked_softmax_rows(logits.value(), mask);
  Mat<S> kept = y;
  return logits.tape()->record(std::move(y), {logits}, [ia, y = std::move(kept)](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, detail::softmax_adjoint(y, g));
  });
}

template <class S>
Var<S> softmax_rows(const Var<S>& logits) {
  const int ia = logits.id();
  Mat<S> y = softmax_rows(logits.value());
  Mat<S> kept = y;
  return logits.tape()->record(std::move(y), {logits}, [ia, y = std::move(kept)](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, detail::softmax_adjoint(y, g));
  });
}

template <class S>
Var<S> block_aggregate(const Var<S>& weights, const Var<S>& values) {
  const int iw = weights.id(), iv = values.id();
  return weights.tape()->record(
      block_aggregate(weights.value(), values.value()), {weights, values}, [iw, iv](Tape<S>& t, const Mat<S>& g) {
        const Mat<S>& w = t.value(iw);
        const Mat<S>& v = t.value(iv);
        const Eigen::Index c = w.cols(), frames = v.rows() / c, r = w.rows() / frames;
        if (t.needs_grad(iw)) {
          Mat<S> gw(w.rows(), w.cols());
          for (Eigen::Index f = 0; f < frames; ++f)
            gw.middleRows(f * r, r).noalias() = g.middleRows(f * r, r) * v.middleRows(f * c, c).transpose();
          t.accumulate(iw, gw);
        }
        if (t.needs_grad(iv)) {
          Mat<S> gv(v.rows(), v.cols());
          for (Eigen::Index f = 0; f < frames; ++f)
            gv.middleRows(f * c, c).noalias() = w.middleRows(f * r, r).transpose() * g.middleRows(f * r, r);
          t.accumulate(iv, gv);
        }
      });
}

template <class S>
Var<S> block_gram(const Var<S>& upper, const Var<S>& lower, int lower_nodes) {
  const int iu = upper.id(), il = lower.id();
  return upper.tape()->record(block_gram(upper.value(), lower.value(), lower_nodes), {upper, lower},
                              [iu, il, lower_nodes](Tape<S>& t, const Mat<S>& g) {
                                const Mat<S>& u = t.value(iu);
                                const Mat<S>& l = t.value(il);
                                const Eigen::Index c = lower_nodes, frames = l.rows() / c, r = u.rows() / frames;
                                if (t.needs_grad(iu)) {
                                  Mat<S> gu(u.rows(), u.cols());
                                  for (Eigen::Index f = 0; f < frames; ++f)
                                    gu.middleRows(f * r, r).noalias() = g.middleRows(f * r, r) * l.middleRows(f * c, c);
                                  t.accumulate(iu, gu);
                                }
                                if (t.needs_grad(il)) {
                                  Mat<S> gl(l.rows(), l.cols());
                                  for (Eigen::Index f = 0; f < frames; ++f)
                                    gl.middleRows(f * c, c).noalias() =
                                        g.middleRows(f * r, r).transpose() * u.middleRows(f * r, r);
                                  t.accumulate(il, gl);
                                }
                              });
}

template <class S>
Var<S> block_pool(const Mat<S>& pool, const Var<S>& x) {
  const int ix = x.id();
  return x.tape()->record(block_pool(pool, x.value()), {x}, [ix, pool](Tape<S>& t, const Mat<S>& g) {
    const Eigen::Index r = pool.rows(), c = pool.cols(), frames = g.rows() / r;
    Mat<S> gx(frames * c, g.cols());
    for (Eigen::Index f = 0; f < frames; ++f) gx.middleRows(f * c, c).noalias() = pool.transpose() * g.middleRows(f * r, r);
    t.accumulate(ix, gx);
  });
}

template <class S>
Var<S> gather_rows(const Var<S>& x, const IndexList& rows) {
  const int ix = x.id();
  return x.tape()->record(gather_rows(x.value(), rows), {x}, [ix, rows](Tape<S>& t, const Mat<S>& g) {
    Mat<S> gx = Mat<S>::Zero(t.value(ix).rows(), t.value(ix).cols());
    for (std::size_t k = 0; k < rows.size(); ++k) gx.row(rows[k]) += g.row(static_cast<Eigen::Index>(k));
    t.accumulate(ix, gx);
  });
}

template <class S>
Var<S> reshape_rows(const Var<S>& x, int group) {
  const int ix = x.id();
  return x.tape()->record(reshape_rows(x.value(), group), {x}, [ix, group](Tape<S>& t, const Mat<S>& g) {
    const Eigen::Index d = t.value(ix).cols();
    Mat<S> gx(t.value(ix).rows(), d);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
      for (int k = 0; k < group; ++k) gx.row(r * group + k) = g.block(r, k * d, 1, d);
    t.accumulate(ix, gx);
  });
}

template <class S>
Var<S> mean_of(const std::vector<Var<S>>& terms) {
  detail::check(!terms.empty(), "mean_of needs at least one term");
  std::vector<Mat<S>> values;
  std::vector<int> ids;
  values.reserve(terms.size());
  for (const Var<S>& v : terms) {
    values.push_back(v.value());
    ids.push_back(v.id());
  }
  const S weight = S(1) / static_cast<S>(terms.size());
  return terms.front().tape()->record(mean_of(values), terms, [ids, weight](Tape<S>& t, const Mat<S>& g) {
    for (int id : ids) t.accumulate(id, g * weight);
  });
}

template <class S>
Var<S> sum_all(const Var<S>& a) {
  const int ia = a.id();
  return a.tape()->record(sum_all(a.value()), {a}, [ia](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, Mat<S>::Constant(t.value(ia).rows(), t.value(ia).cols(), g(0, 0)));
  });
}

template <class S>
Var<S> squared_norm(const Var<S>& a) {
  const int ia = a.id();
  return a.tape()->record(squared_norm(a.value()), {a},
                          [ia](Tape<S>& t, const Mat<S>& g) { t.accumulate(ia, t.value(ia) * (S(2) * g(0, 0))); });
}

template <class S>
Var<S> pick(const Var<S>& x, const IndexList& cols) {
  const int ix = x.id();
  return x.tape()->record(pick(x.value(), cols), {x}, [ix, cols](Tape<S>& t, const Mat<S>& g) {
    Mat<S> gx = Mat<S>::Zero(t.value(ix).rows(), t.value(ix).cols());
    for (std::size_t i = 0; i < cols.size(); ++i) gx(static_cast<Eigen::Index>(i), cols[i]) = g(static_cast<Eigen::Index>(i), 0);
    t.accumulate(ix, gx);
  });
}

template <class S>
Var<S> log_floor(const Var<S>& a, S floor) {
  const int ia = a.id();
  return a.tape()->record(log_floor(a.value(), floor), {a}, [ia, floor](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g.binaryExpr(t.value(ia), [floor](S gi, S xi) { return xi > floor ? gi / xi : S(0); }));
  });
}

template <class S>
S scalar_value(const Var<S>& a) {
  return scalar_value(a.value());
}

template <class S>
const Mat<S>& value_of(const Var<S>& a) {
  return a.value();
}

}  // namespace skelgraph

#endif  // SKELGRAPH_AUTODIFF_HPP
