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

#pragma once

// Minimal define-by-run reverse-mode automatic differentiation over dense
// double-precision tensors.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace svae {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values);

  static Tensor zeros(Shape shape);
  static Tensor filled(Shape shape, double value);
  static Tensor scalar(double value);
  static Tensor vector(std::vector<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  // Rank-2 accessors. A rank-1 tensor is treated as a single row.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const { return values_; }
  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::size_t row, std::size_t col) const;
  // Value of a single-element tensor.
  double item() const;

  bool has_grad() const { return grad_.has_value(); }
  std::span<const double> grad() const;
  void set_grad(std::vector<double> grad);
  void clear_grad() { grad_.reset(); }

  bool all_finite() const;

 private:
  Shape shape_;
  std::vector<double> values_;
  std::optional<std::vector<double>> grad_;
};

bool operator==(const Tensor& a, const Tensor& b);

enum class Primitive {
  kLeaf,
  kAdd,
  kSubtract,
  kMultiply,
  kMatMul,
  kRelu,
  kLeakyRelu,
  kTanh,
  kSigmoid,
  kLog,
  kExp,
  kSoftplus,
  kNegate,
  kMeanReduce,
  kSumReduce,
  kConcat,
  kBroadcastAdd,
  kSquare,
  kScale,
  kAddScalar,
  kRowSum,
  kSliceColumns,
};

const char* primitive_name(Primitive kind);

// Extra arguments for the parameterized primitives: the slope of
// leaky-relu, the factor of scale/add-scalar, the column range of slices.
struct PrimitiveAttrs {
  double scalar = 0.0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Graph;

// Handle to a node of a graph. Cheap to copy; valid while the graph lives.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, std::size_t id) : graph_(graph), id_(id) {}

  Graph& graph() const { return *graph_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  bool valid() const { return graph_ != nullptr; }

 private:
  Graph* graph_ = nullptr;
  std::size_t id_ = 0;
};

class Graph {
 public:
  struct Node {
    Primitive kind;
    std::vector<std::size_t> inputs;
    PrimitiveAttrs attrs;
    Tensor value;
    bool requires_grad;
  };

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // A leaf whose gradient is not tracked.
  Var constant(Tensor value);
  // A leaf whose gradient is tracked (a parameter of the current phase).
  Var variable(Tensor value);

  Var apply(Primitive kind, std::span<const Var> inputs,
            PrimitiveAttrs attrs = {});
  Var apply(Primitive kind, std::initializer_list<Var> inputs,
            PrimitiveAttrs attrs = {});

  const Tensor& value(Var v) const { return nodes_[v.id()].value; }
  const Node& node(std::size_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  // Reverse sweep from a scalar loss. Gradients of every tracked leaf are
  // stored in the leaf's grad slot and returned by grad().
  void backward(Var loss);
  // Gradient of the last backward() w.r.t. a tracked leaf.
  Tensor grad(Var leaf) const;

 private:
  Tensor evaluate(Primitive kind, const std::vector<std::size_t>& inputs,
                  const PrimitiveAttrs& attrs) const;
  void propagate(const Node& node, std::span<const double> adjoint,
                 std::vector<std::vector<double>>& adjoints) const;

  std::vector<Node> nodes_;
};

// Primitive wrappers.
Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator-(Var a);
Var matmul(Var a, Var b);
Var relu(Var a);
Var leaky_relu(Var a, double slope = 0.2);
Var tanh(Var a);
Var sigmoid(Var a);
Var log(Var a);
Var exp(Var a);
Var softplus(Var a);
Var mean(Var a);
Var sum(Var a);
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);
Var broadcast_add(Var matrix, Var row);
Var square(Var a);
Var scale(Var a, double factor);
Var add_scalar(Var a, double offset);
Var row_sum(Var a);
Var slice_columns(Var a, std::size_t begin, std::size_t end);
// log(sigmoid(a)) = -softplus(-a), stable for large |a|.
Var log_sigmoid(Var a);

// Numerically stable scalar helpers shared by the primitives.
double stable_sigmoid(double x);
double stable_softplus(double x);

// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h for every
// coordinate of params.
Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f,
                              const Tensor& params, double step);

}  // namespace svae
