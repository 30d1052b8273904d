// Copyright 2026 The svae-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svae/tensor.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "svae/error.hpp"

namespace svae {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

[[noreturn]] void shape_fail(Primitive kind, const std::string& detail) {
  throw ShapeError(std::string(primitive_name(kind)) + ": " + detail);
}

void require_same_shape(Primitive kind, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    shape_fail(kind, "operand shapes differ: " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
  }
}

void require_rank2(Primitive kind, const Tensor& a) {
  if (a.rank() != 2) {
    shape_fail(kind, "expected a rank-2 operand, got " +
                         shape_string(a.shape()));
  }
}

std::size_t arity(Primitive kind) {
  switch (kind) {
    case Primitive::kLeaf:
      return 0;
    case Primitive::kAdd:
    case Primitive::kSubtract:
    case Primitive::kMultiply:
    case Primitive::kMatMul:
    case Primitive::kBroadcastAdd:
      return 2;
    case Primitive::kConcat:
      return 0;  // variadic
    default:
      return 1;
  }
}

template <typename F>
Tensor map_unary(const Tensor& a, F f) {
  std::vector<double> out(a.size());
  const double* x = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(x[i]);
  return Tensor(a.shape(), std::move(out));
}

}  // namespace

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_size(shape_) != values_.size()) {
    throw ShapeError("tensor: shape " + shape_string(shape_) + " holds " +
                     std::to_string(shape_size(shape_)) + " values, got " +
                     std::to_string(values_.size()));
  }
}

Tensor Tensor::zeros(Shape shape) { return filled(std::move(shape), 0.0); }

Tensor Tensor::filled(Shape shape, double value) {
  const auto n = shape_size(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

Tensor Tensor::vector(std::vector<double> values) {
  const auto n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

std::size_t Tensor::rows() const {
  if (rank() == 2) return shape_[0];
  if (rank() == 1) return 1;
  throw ShapeError("tensor: rows() of shape " + shape_string(shape_));
}

std::size_t Tensor::cols() const {
  if (rank() == 2) return shape_[1];
  if (rank() == 1) return shape_[0];
  throw ShapeError("tensor: cols() of shape " + shape_string(shape_));
}

double Tensor::at(std::size_t row, std::size_t col) const {
  return values_[row * cols() + col];
}

double Tensor::item() const {
  if (values_.size() != 1) {
    throw ShapeError("tensor: item() of shape " + shape_string(shape_));
  }
  return values_[0];
}

std::span<const double> Tensor::grad() const {
  if (!grad_) throw Error("tensor: grad slot is empty");
  return *grad_;
}

void Tensor::set_grad(std::vector<double> grad) {
  if (grad.size() != values_.size()) {
    throw ShapeError("tensor: gradient size " + std::to_string(grad.size()) +
                     " does not match shape " + shape_string(shape_));
  }
  grad_ = std::move(grad);
}

bool Tensor::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool operator==(const Tensor& a, const Tensor& b) {
  return a.shape() == b.shape() &&
         std::equal(a.values().begin(), a.values().end(), b.values().begin());
}

const char* primitive_name(Primitive kind) {
  switch (kind) {
    case Primitive::kLeaf: return "leaf";
    case Primitive::kAdd: return "add";
    case Primitive::kSubtract: return "subtract";
    case Primitive::kMultiply: return "multiply";
    case Primitive::kMatMul: return "matmul";
    case Primitive::kRelu: return "relu";
    case Primitive::kLeakyRelu: return "leaky-relu";
    case Primitive::kTanh: return "tanh";
    case Primitive::kSigmoid: return "sigmoid";
    case Primitive::kLog: return "log";
    case Primitive::kExp: return "exp";
    case Primitive::kSoftplus: return "softplus";
    case Primitive::kNegate: return "negate";
    case Primitive::kMeanReduce: return "mean-reduce";
    case Primitive::kSumReduce: return "sum-reduce";
    case Primitive::kConcat: return "concat";
    case Primitive::kBroadcastAdd: return "broadcast-add";
    case Primitive::kSquare: return "square";
    case Primitive::kScale: return "scale";
    case Primitive::kAddScalar: return "add-scalar";
    case Primitive::kRowSum: return "row-sum";
    case Primitive::kSliceColumns: return "slice-columns";
  }
  return "unknown";
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

const Tensor& Var::value() const { return graph_->value(*this); }

Var Graph::constant(Tensor value) {
  nodes_.push_back({Primitive::kLeaf, {}, {}, std::move(value), false});
  return Var(this, nodes_.size() - 1);
}

Var Graph::variable(Tensor value) {
  value.clear_grad();
  nodes_.push_back({Primitive::kLeaf, {}, {}, std::move(value), true});
  return Var(this, nodes_.size() - 1);
}

Var Graph::apply(Primitive kind, std::initializer_list<Var> inputs,
                 PrimitiveAttrs attrs) {
  return apply(kind, std::span<const Var>(inputs.begin(), inputs.size()),
               attrs);
}

Var Graph::apply(Primitive kind, std::span<const Var> inputs,
                 PrimitiveAttrs attrs) {
  if (kind == Primitive::kLeaf) {
    throw Error("leaf nodes are created with constant() or variable()");
  }
  const auto expected = arity(kind);
  if (kind == Primitive::kConcat ? inputs.empty()
                                 : inputs.size() != expected) {
    shape_fail(kind, "wrong number of inputs (" +
                         std::to_string(inputs.size()) + ")");
  }
  std::vector<std::size_t> ids;
  ids.reserve(inputs.size());
  bool requires_grad = false;
  for (const auto& in : inputs) {
    if (&in.graph() != this) throw Error("input belongs to another graph");
    ids.push_back(in.id());
    requires_grad = requires_grad || nodes_[in.id()].requires_grad;
  }
  Tensor out = evaluate(kind, ids, attrs);
  nodes_.push_back({kind, std::move(ids), attrs, std::move(out),
                    requires_grad});
  return Var(this, nodes_.size() - 1);
}

Tensor Graph::evaluate(Primitive kind, const std::vector<std::size_t>& ids,
                       const PrimitiveAttrs& attrs) const {
  const Tensor& a = nodes_[ids[0]].value;
  switch (kind) {
    case Primitive::kAdd:
    case Primitive::kSubtract:
    case Primitive::kMultiply: {
      const Tensor& b = nodes_[ids[1]].value;
      require_same_shape(kind, a, b);
      std::vector<double> out(a.size());
      const double* x = a.data();
      const double* y = b.data();
      if (kind == Primitive::kAdd) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
      } else if (kind == Primitive::kSubtract) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - y[i];
      } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
      }
      return Tensor(a.shape(), std::move(out));
    }
    case Primitive::kMatMul: {
      const Tensor& b = nodes_[ids[1]].value;
      require_rank2(kind, a);
      require_rank2(kind, b);
      if (a.cols() != b.rows()) {
        shape_fail(kind, "inner dimensions differ: " +
                             shape_string(a.shape()) + " x " +
                             shape_string(b.shape()));
      }
      std::vector<double> out(a.rows() * b.cols());
      MutMap(out.data(), a.rows(), b.cols()).noalias() =
          ConstMap(a.data(), a.rows(), a.cols()) *
          ConstMap(b.data(), b.rows(), b.cols());
      return Tensor({a.rows(), b.cols()}, std::move(out));
    }
    case Primitive::kBroadcastAdd: {
      const Tensor& b = nodes_[ids[1]].value;
      require_rank2(kind, a);
      if (b.size() != a.cols() || b.rank() > 2 ||
          (b.rank() == 2 && b.rows() != 1)) {
        shape_fail(kind, "row operand " + shape_string(b.shape()) +
                             " does not match " + shape_string(a.shape()));
      }
      std::vector<double> out(a.values().begin(), a.values().end());
      const std::size_t n = a.rows(), m = a.cols();
      for (std::size_t r = 0; r < n; ++r) {
        double* row = out.data() + r * m;
        for (std::size_t c = 0; c < m; ++c) row[c] += b[c];
      }
      return Tensor(a.shape(), std::move(out));
    }
    case Primitive::kRelu:
      return map_unary(a, [](double x) { return x > 0.0 ? x : 0.0; });
    case Primitive::kLeakyRelu: {
      const double slope = attrs.scalar;
      return map_unary(a, [slope](double x) { return x > 0.0 ? x : slope * x; });
    }
    case Primitive::kTanh:
      return map_unary(a, [](double x) { return std::tanh(x); });
    case Primitive::kSigmoid:
      return map_unary(a, stable_sigmoid);
    case Primitive::kLog: {
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0)) {
          throw DomainError("log: argument " + std::to_string(a[i]) +
                            " at index " + std::to_string(i) +
                            " is not positive");
        }
      }
      return map_unary(a, [](double x) { return std::log(x); });
    }
    case Primitive::kExp: {
      Tensor out = map_unary(a, [](double x) { return std::exp(x); });
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i])) {
          throw DomainError("exp: overflow at index " + std::to_string(i) +
                            " (argument " + std::to_string(a[i]) + ")");
        }
      }
      return out;
    }
    case Primitive::kSoftplus:
      return map_unary(a, stable_softplus);
    case Primitive::kNegate:
      return map_unary(a, [](double x) { return -x; });
    case Primitive::kSquare:
      return map_unary(a, [](double x) { return x * x; });
    case Primitive::kScale: {
      const double c = attrs.scalar;
      return map_unary(a, [c](double x) { return c * x; });
    }
    case Primitive::kAddScalar: {
      const double c = attrs.scalar;
      return map_unary(a, [c](double x) { return x + c; });
    }
    case Primitive::kMeanReduce:
    case Primitive::kSumReduce: {
      if (a.size() == 0) shape_fail(kind, "empty operand");
      double s = 0.0;
      for (double v : a.values()) s += v;
      if (kind == Primitive::kMeanReduce) s /= static_cast<double>(a.size());
      return Tensor::scalar(s);
    }
    case Primitive::kRowSum: {
      require_rank2(kind, a);
      const std::size_t n = a.rows(), m = a.cols();
      std::vector<double> out(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        const double* row = a.data() + r * m;
        double s = 0.0;
        for (std::size_t c = 0; c < m; ++c) s += row[c];
        out[r] = s;
      }
      return Tensor({n}, std::move(out));
    }
    case Primitive::kSliceColumns: {
      require_rank2(kind, a);
      if (attrs.begin >= attrs.end || attrs.end > a.cols()) {
        shape_fail(kind, "column range [" + std::to_string(attrs.begin) +
                             ", " + std::to_string(attrs.end) +
                             ") outside " + shape_string(a.shape()));
      }
      const std::size_t n = a.rows(), m = a.cols(), w = attrs.end - attrs.begin;
      std::vector<double> out(n * w);
      for (std::size_t r = 0; r < n; ++r) {
        std::copy_n(a.data() + r * m + attrs.begin, w, out.data() + r * w);
      }
      return Tensor({n, w}, std::move(out));
    }
    case Primitive::kConcat: {
      std::size_t total = 0;
      const std::size_t n = a.rank() == 2 ? a.rows() : 0;
      for (auto id : ids) {
        const Tensor& t = nodes_[id].value;
        require_rank2(kind, t);
        if (t.rows() != n) {
          shape_fail(kind, "row counts differ: " + shape_string(a.shape()) +
                               " vs " + shape_string(t.shape()));
        }
        total += t.cols();
      }
      std::vector<double> out(n * total);
      std::size_t offset = 0;
      for (auto id : ids) {
        const Tensor& t = nodes_[id].value;
        const std::size_t w = t.cols();
        for (std::size_t r = 0; r < n; ++r) {
          std::copy_n(t.data() + r * w, w, out.data() + r * total + offset);
        }
        offset += w;
      }
      return Tensor({n, total}, std::move(out));
    }
    case Primitive::kLeaf:
      break;
  }
  throw Error("unhandled primitive");
}

void Graph::backward(Var loss) {
  if (&loss.graph() != this) throw Error("backward: loss from another graph");
  const Node& root = nodes_[loss.id()];
  if (root.value.size() != 1) {
    throw ShapeError("backward: loss must be scalar, got shape " +
                     shape_string(root.value.shape()));
  }
  std::vector<std::vector<double>> adjoints(loss.id() + 1);
  adjoints[loss.id()] = {1.0};
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.requires_grad) continue;
    if (adjoints[i].empty()) adjoints[i].assign(node.value.size(), 0.0);
    if (node.kind == Primitive::kLeaf) {
      node.value.set_grad(std::move(adjoints[i]));
      continue;
    }
    propagate(node, adjoints[i], adjoints);
    adjoints[i].clear();
    adjoints[i].shrink_to_fit();
  }
  for (std::size_t i = loss.id() + 1; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == Primitive::kLeaf && nodes_[i].requires_grad) {
      nodes_[i].value.set_grad(
          std::vector<double>(nodes_[i].value.size(), 0.0));
    }
  }
}

Tensor Graph::grad(Var leaf) const {
  const Node& node = nodes_[leaf.id()];
  if (node.kind != Primitive::kLeaf || !node.requires_grad) {
    throw Error("grad: node is not a tracked leaf");
  }
  const auto g = node.value.grad();
  return Tensor(node.value.shape(), std::vector<double>(g.begin(), g.end()));
}

void Graph::propagate(const Node& node, std::span<const double> adj,
                      std::vector<std::vector<double>>& adjoints) const {
  // Returns the adjoint buffer of input k, or nullptr when it is not tracked.
  auto target = [&](std::size_t k) -> double* {
    const std::size_t id = node.inputs[k];
    if (!nodes_[id].requires_grad) return nullptr;
    auto& buf = adjoints[id];
    if (buf.empty()) buf.assign(nodes_[id].value.size(), 0.0);
    return buf.data();
  };
  const Tensor& out = node.value;
  const Tensor& a = nodes_[node.inputs[0]].value;
  const std::size_t n = adj.size();

  switch (node.kind) {
    case Primitive::kAdd:
    case Primitive::kSubtract: {
      if (double* ga = target(0)) {
        for (std::size_t i = 0; i < n; ++i) ga[i] += adj[i];
      }
      if (double* gb = target(1)) {
        const double sign = node.kind == Primitive::kAdd ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) gb[i] += sign * adj[i];
      }
      return;
    }
    case Primitive::kMultiply: {
      const Tensor& b = nodes_[node.inputs[1]].value;
      if (double* ga = target(0)) {
        for (std::size_t i = 0; i < n; ++i) ga[i] += adj[i] * b[i];
      }
      if (double* gb = target(1)) {
        for (std::size_t i = 0; i < n; ++i) gb[i] += adj[i] * a[i];
      }
      return;
    }
    case Primitive::kMatMul: {
      const Tensor& b = nodes_[node.inputs[1]].value;
      ConstMap dc(adj.data(), out.rows(), out.cols());
      if (double* ga = target(0)) {
        MutMap(ga, a.rows(), a.cols()).noalias() +=
            dc * ConstMap(b.data(), b.rows(), b.cols()).transpose();
      }
      if (double* gb = target(1)) {
        MutMap(gb, b.rows(), b.cols()).noalias() +=
            ConstMap(a.data(), a.rows(), a.cols()).transpose() * dc;
      }
      return;
    }
    case Primitive::kBroadcastAdd: {
      if (double* ga = target(0)) {
        for (std::size_t i = 0; i < n; ++i) ga[i] += adj[i];
      }
      if (double* gb = target(1)) {
        const std::size_t rows = a.rows(), m = a.cols();
        for (std::size_t r = 0; r < rows; ++r) {
          const double* row = adj.data() + r * m;
          for (std::size_t c = 0; c < m; ++c) gb[c] += row[c];
        }
      }
      return;
    }
    case Primitive::kRelu:
    case Primitive::kLeakyRelu:
    case Primitive::kTanh:
    case Primitive::kSigmoid:
    case Primitive::kLog:
    case Primitive::kExp:
    case Primitive::kSoftplus:
    case Primitive::kNegate:
    case Primitive::kSquare:
    case Primitive::kScale:
    case Primitive::kAddScalar: {
      double* ga = target(0);
      if (!ga) return;
      const double c = node.attrs.scalar;
      for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        switch (node.kind) {
          case Primitive::kRelu: d = a[i] > 0.0 ? 1.0 : 0.0; break;
          case Primitive::kLeakyRelu: d = a[i] > 0.0 ? 1.0 : c; break;
          case Primitive::kTanh: d = 1.0 - out[i] * out[i]; break;
          case Primitive::kSigmoid: d = out[i] * (1.0 - out[i]); break;
          case Primitive::kLog: d = 1.0 / a[i]; break;
          case Primitive::kExp: d = out[i]; break;
          case Primitive::kSoftplus: d = stable_sigmoid(a[i]); break;
          case Primitive::kNegate: d = -1.0; break;
          case Primitive::kSquare: d = 2.0 * a[i]; break;
          case Primitive::kScale: d = c; break;
          default: d = 1.0; break;
        }
        ga[i] += adj[i] * d;
      }
      return;
    }
    case Primitive::kMeanReduce:
    case Primitive::kSumReduce: {
      double* ga = target(0);
      if (!ga) return;
      double g = adj[0];
      if (node.kind == Primitive::kMeanReduce) {
        g /= static_cast<double>(a.size());
      }
      for (std::size_t i = 0; i < a.size(); ++i) ga[i] += g;
      return;
    }
    case Primitive::kRowSum: {
      double* ga = target(0);
      if (!ga) return;
      const std::size_t m = a.cols();
      for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < m; ++c) ga[r * m + c] += adj[r];
      }
      return;
    }
    case Primitive::kSliceColumns: {
      double* ga = target(0);
      if (!ga) return;
      const std::size_t m = a.cols(), b0 = node.attrs.begin;
      const std::size_t w = node.attrs.end - b0;
      for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < w; ++c) ga[r * m + b0 + c] += adj[r * w + c];
      }
      return;
    }
    case Primitive::kConcat: {
      const std::size_t total = out.cols(), rows = out.rows();
      std::size_t offset = 0;
      for (std::size_t k = 0; k < node.inputs.size(); ++k) {
        const std::size_t w = nodes_[node.inputs[k]].value.cols();
        if (double* g = target(k)) {
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
              g[r * w + c] += adj[r * total + offset + c];
            }
          }
        }
        offset += w;
      }
      return;
    }
    case Primitive::kLeaf:
      return;
  }
}

Var operator+(Var a, Var b) { return a.graph().apply(Primitive::kAdd, {a, b}); }
Var operator-(Var a, Var b) {
  return a.graph().apply(Primitive::kSubtract, {a, b});
}
Var operator*(Var a, Var b) {
  return a.graph().apply(Primitive::kMultiply, {a, b});
}
Var operator-(Var a) { return a.graph().apply(Primitive::kNegate, {a}); }
Var matmul(Var a, Var b) { return a.graph().apply(Primitive::kMatMul, {a, b}); }
Var relu(Var a) { return a.graph().apply(Primitive::kRelu, {a}); }
Var leaky_relu(Var a, double slope) {
  return a.graph().apply(Primitive::kLeakyRelu, {a}, {.scalar = slope});
}
Var tanh(Var a) { return a.graph().apply(Primitive::kTanh, {a}); }
Var sigmoid(Var a) { return a.graph().apply(Primitive::kSigmoid, {a}); }
Var log(Var a) { return a.graph().apply(Primitive::kLog, {a}); }
Var exp(Var a) { return a.graph().apply(Primitive::kExp, {a}); }
Var softplus(Var a) { return a.graph().apply(Primitive::kSoftplus, {a}); }
Var mean(Var a) { return a.graph().apply(Primitive::kMeanReduce, {a}); }
Var sum(Var a) { return a.graph().apply(Primitive::kSumReduce, {a}); }
Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  return parts.front().graph().apply(Primitive::kConcat, parts);
}
Var concat(std::initializer_list<Var> parts) {
  return concat(std::span<const Var>(parts.begin(), parts.size()));
}
Var broadcast_add(Var matrix, Var row) {
  return matrix.graph().apply(Primitive::kBroadcastAdd, {matrix, row});
}
Var square(Var a) { return a.graph().apply(Primitive::kSquare, {a}); }
Var scale(Var a, double factor) {
  return a.graph().apply(Primitive::kScale, {a}, {.scalar = factor});
}
Var add_scalar(Var a, double offset) {
  return a.graph().apply(Primitive::kAddScalar, {a}, {.scalar = offset});
}
Var row_sum(Var a) { return a.graph().apply(Primitive::kRowSum, {a}); }
Var slice_columns(Var a, std::size_t begin, std::size_t end) {
  return a.graph().apply(Primitive::kSliceColumns, {a},
                         {.begin = begin, .end = end});
}
Var log_sigmoid(Var a) { return -softplus(-a); }

Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f,
                              const Tensor& params, double step) {
  if (!(step > 0.0)) throw Error("finite_difference_grad: step must be > 0");
  std::vector<double> probe(params.values().begin(), params.values().end());
  std::vector<double> grad(probe.size());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + step;
    const double up = f(Tensor(params.shape(), probe));
    probe[i] = saved - step;
    const double down = f(Tensor(params.shape(), probe));
    probe[i] = saved;
    grad[i] = (up - down) / (2.0 * step);
  }
  return Tensor(params.shape(), std::move(grad));
}

}  // namespace svae
