// Copyright 2026 The framelstm Authors.
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

#ifndef FRAMELSTM_NEURAL_AUTODIFF_H_
#define FRAMELSTM_NEURAL_AUTODIFF_H_

// Tape-based reverse-mode differentiation over dense double matrices. Every
// value is a matrix; vectors are n x 1 columns. Nodes are recorded in
// creation order, which is a topological order, and Backward walks them in
// reverse.

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "framelstm/neural/parameters.h"

namespace framelstm::neural {

class Tape;

// Handle to a node on a tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape *tape, int id) : tape_(tape), id_(id) {}

  Tape *tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Eigen::MatrixXd &value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  // Value of a 1 x 1 node.
  double scalar() const;

 private:
  Tape *tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  using BackwardFn = std::function<void(Tape &, int self)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var Constant(Eigen::MatrixXd value);
  // Leaf bound to a parameter. Binding the same parameter twice returns the
  // same node, so every use contributes to one gradient.
  Var Param(const Parameter &param);

  // Records a computed node. `backward` reads GradOf(self) and calls AddGrad
  // on the inputs.
  Var Push(Eigen::MatrixXd value, BackwardFn backward);

  const Eigen::MatrixXd &value(int id) const;
  const Eigen::MatrixXd &GradOf(int id) const { return nodes_[id].grad; }
  void AddGrad(int id, const Eigen::MatrixXd &g);

  // Seeds d loss / d loss = 1 and propagates. Throws std::invalid_argument
  // unless `loss` is 1 x 1. Clears gradients from any earlier call first.
  void Backward(Var loss);

  // Gradient of `v` after Backward; nullptr when v was not reached.
  const Eigen::MatrixXd *grad(Var v) const;

  // One entry per bound parameter; unreached parameters get zeros.
  std::vector<std::pair<const Parameter *, Eigen::MatrixXd>>
  ParameterGradients() const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Eigen::MatrixXd value;
    const Eigen::MatrixXd *ref = nullptr;  // parameter leaves
    const Parameter *param = nullptr;
    Eigen::MatrixXd grad;  // empty until reached
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter *, int> param_nodes_;
};

// Primitive operations. All inputs must live on the same tape.

Var MatMul(Var a, Var b);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
// Adds column vector `col` to every column of `a`.
Var AddColumn(Var a, Var col);
Var Hadamard(Var a, Var b);
Var Scale(Var a, double factor);
Var OneMinus(Var a);
Var Sigmoid(Var a);
Var Tanh(Var a);
Var Transpose(Var a);
// Stacks vertically (rows) or horizontally (cols).
Var ConcatRows(const std::vector<Var> &parts);
Var ConcatCols(const std::vector<Var> &parts);
Var Column(Var a, Eigen::Index j);
// Elementwise sum of equally shaped nodes.
Var Sum(const std::vector<Var> &parts);
// Softmax over all entries of a row or column vector.
Var Softmax(Var logits);
// -ln max(p[gold], 1e-12) for a probability vector.
Var CrossEntropy(Var probabilities, Eigen::Index gold);
// -ln softmax(logits)[gold], fused so the gradient is p - onehot(gold).
Var SoftmaxCrossEntropy(Var logits, Eigen::Index gold);

inline Var operator*(Var a, Var b) { return MatMul(a, b); }
inline Var operator+(Var a, Var b) { return Add(a, b); }
inline Var operator-(Var a, Var b) { return Sub(a, b); }

}  // namespace framelstm::neural

#endif  // FRAMELSTM_NEURAL_AUTODIFF_H_
