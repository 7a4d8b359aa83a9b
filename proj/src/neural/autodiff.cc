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

#include "framelstm/neural/autodiff.h"

#include <cassert>
#include <cmath>
#include <string>

#include "framelstm/neural/functional.h"

namespace framelstm::neural {

const Eigen::MatrixXd &Var::value() const { return tape_->value(id_); }

double Var::scalar() const {
  const auto &v = value();
  if (v.size() != 1) throw DimensionError("node is not a scalar");
  return v(0, 0);
}

Var Tape::Constant(Eigen::MatrixXd value) {
  return Push(std::move(value), nullptr);
}

Var Tape::Param(const Parameter &param) {
  auto it = param_nodes_.find(&param);
  if (it != param_nodes_.end()) return Var(this, it->second);
  const int id = static_cast<int>(nodes_.size());
  Node &node = nodes_.emplace_back();
  node.ref = &param.value;
  node.param = &param;
  param_nodes_.emplace(&param, id);
  return Var(this, id);
}

Var Tape::Push(Eigen::MatrixXd value, BackwardFn backward) {
  assert(value.allFinite() && "non-finite value recorded on tape");
  const int id = static_cast<int>(nodes_.size());
  Node &node = nodes_.emplace_back();
  node.value = std::move(value);
  node.backward = std::move(backward);
  return Var(this, id);
}

const Eigen::MatrixXd &Tape::value(int id) const {
  const Node &node = nodes_[id];
  return node.ref ? *node.ref : node.value;
}

void Tape::AddGrad(int id, const Eigen::MatrixXd &g) {
  Node &node = nodes_[id];
  if (node.grad.size() == 0) {
    node.grad = g;
  } else {
    node.grad += g;
  }
}

void Tape::Backward(Var loss) {
  if (loss.tape() != this) throw std::invalid_argument("foreign loss node");
  const auto &v = value(loss.id());
  if (v.rows() != 1 || v.cols() != 1) {
    throw std::invalid_argument("loss must be a scalar, got " +
                                std::to_string(v.rows()) + "x" +
                                std::to_string(v.cols()));
  }
  for (auto &node : nodes_) node.grad.resize(0, 0);
  nodes_[loss.id()].grad = Eigen::MatrixXd::Ones(1, 1);
  for (int id = loss.id(); id >= 0; --id) {
    Node &node = nodes_[id];
    if (node.grad.size() == 0 || !node.backward) continue;
    node.backward(*this, id);
  }
}

const Eigen::MatrixXd *Tape::grad(Var v) const {
  const Node &node = nodes_[v.id()];
  return node.grad.size() == 0 ? nullptr : &node.grad;
}

std::vector<std::pair<const Parameter *, Eigen::MatrixXd>>
Tape::ParameterGradients() const {
  std::vector<std::pair<const Parameter *, Eigen::MatrixXd>> out;
  for (const auto &node : nodes_) {
    if (!node.param) continue;
    if (node.grad.size() == 0) {
      out.emplace_back(node.param, Eigen::MatrixXd::Zero(node.ref->rows(),
                                                         node.ref->cols()));
    } else {
      out.emplace_back(node.param, node.grad);
    }
  }
  return out;
}

namespace {

Tape &TapeOf(Var a) {
  if (!a.valid()) throw std::invalid_argument("operation on an empty Var");
  return *a.tape();
}

Tape &TapeOf(Var a, Var b) {
  if (a.tape() != b.tape()) {
    throw std::invalid_argument("operands live on different tapes");
  }
  return TapeOf(a);
}

void RequireSameShape(Var a, Var b, const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

}  // namespace

Var MatMul(Var a, Var b) {
  Tape &tape = TapeOf(a, b);
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  Eigen::MatrixXd out = a.value() * b.value();
  const int ia = a.id(), ib = b.id();
  return tape.Push(std::move(out), [ia, ib](Tape &t, int self) {
    const auto &g = t.GradOf(self);
    t.AddGrad(ia, g * t.value(ib).transpose());
    t.AddGrad(ib, t.value(ia).transpose() * g);
  });
}

Var Add(Var a, Var b) {
  Tape &tape = TapeOf(a, b);
  RequireSameShape(a, b, "add");
  Eigen::MatrixXd out = a.value() + b.value();
  const int ia = a.id(), ib = b.id();
  return tape.Push(std::move(out), [ia, ib](Tape &t, int self) {
    const Eigen::MatrixXd g = t.GradOf(self);
    t.AddGrad(ia, g);
    t.AddGrad(ib, g);
  });
}

Var Sub(Var a, Var b) {
  Tape &tape = TapeOf(a, b);
  RequireSameShape(a, b, "sub");
  Eigen::MatrixXd out = a.value() - b.value();
  const int ia = a.id(), ib = b.id();
  return tape.Push(std::move(out), [ia, ib](Tape &t, int self) {
    const Eigen::MatrixXd g = t.GradOf(self);
    t.AddGrad(ia, g);
    t.AddGrad(ib, -g);
  });
}

Var AddColumn(Var a, Var col) {
  Tape &tape = TapeOf(a, col);
  if (col.cols() != 1 || col.rows() != a.rows()) {
    throw DimensionError("add_column: column does not match row count");
  }
  Eigen::MatrixXd out = a.value().colwise() + col.value().col(0);
  const int ia = a.id(), ic = col.id();
  return tape.Push(std::move(out), [ia, ic](Tape &t, int self) {
    const Eigen::MatrixXd g = t.GradOf(self);
    t.AddGrad(ia, g);
    t.AddGrad(ic, g.rowwise().sum());
  });
}

Var Hadamard(Var a, Var b) {
  Tape &tape = TapeOf(a, b);
  RequireSameShape(a, b, "hadamard");
  Eigen::MatrixXd out = a.value().cwiseProduct(b.value());
  const int ia = a.id(), ib = b.id();
  return tape.Push(std::move(out), [ia, ib](Tape &t, int self) {
    const auto &g = t.GradOf(self);
    Eigen::MatrixXd ga = g.cwiseProduct(t.value(ib));
    Eigen::MatrixXd gb = g.cwiseProduct(t.value(ia));
    t.AddGrad(ia, ga);
    t.AddGrad(ib, gb);
  });
}

Var Scale(Var a, double factor) {
  Tape &tape = TapeOf(a);
  Eigen::MatrixXd out = a.value() * factor;
  const int ia = a.id();
  return tape.Push(std::move(out), [ia, factor](Tape &t, int self) {
    t.AddGrad(ia, t.GradOf(self) * factor);
  });
}

Var OneMinus(Var a) {
  Tape &tape = TapeOf(a);
  Eigen::MatrixXd out = (1.0 - a.value().array()).matrix();
  const int ia = a.id();
  return tape.Push(std::move(out), [ia](Tape &t, int self) {
    t.AddGrad(ia, -t.GradOf(self));
  });
}

Var Sigmoid(Var a) {
  Tape &tape = TapeOf(a);
  Eigen::MatrixXd out = a.value().unaryExpr([](double v) {
    return neural::Sigmoid(v);
  });
  const int ia = a.id();
  return tape.Push(std::move(out), [ia](Tape &t, int self) {
    const auto &y = t.value(self);
    Eigen::MatrixXd g =
        t.GradOf(self).array() * y.array() * (1.0 - y.array());
    t.AddGrad(ia, g);
  });
}

Var Tanh(Var a) {
  Tape &tape = TapeOf(a);
  Eigen::MatrixXd out = a.value().array().tanh().matrix();
  const int ia = a.id();
  return tape.Push(std::move(out), [ia](Tape &t, int self) {
    const auto &y = t.value(self);
    Eigen::MatrixXd g = t.GradOf(self).array() * (1.0 - y.array().square());
    t.AddGrad(ia, g);
  });
}

Var Transpose(Var a) {
  Tape &tape = TapeOf(a);
  Eigen::MatrixXd out = a.value().transpose();
  const int ia = a.id();
  return tape.Push(std::move(out), [ia](Tape &t, int self) {
    t.AddGrad(ia, t.GradOf(self).transpose());
  });
}

Var ConcatRows(const std::vector<Var> &parts) {
  if (parts.empty()) throw DimensionError("concat of nothing");
  Tape &tape = TapeOf(parts.front());
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts.front().cols();
  for (const Var &p : parts) {
    TapeOf(parts.front(), p);
    if (p.cols() != cols) throw DimensionError("concat_rows: column mismatch");
    rows += p.rows();
  }
  Eigen::MatrixXd out(rows, cols);
  std::vector<std::pair<int, Eigen::Index>> pieces;  // (id, rows)
  Eigen::Index at = 0;
  for (const Var &p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    pieces.emplace_back(p.id(), p.rows());
    at += p.rows();
  }
  return tape.Push(std::move(out), [pieces](Tape &t, int self) {
    const auto &g = t.GradOf(self);
    Eigen::Index offset = 0;
    for (const auto &[id, rows] : pieces) {
      t.AddGrad(id, g.middleRows(offset, rows));
      offset += rows;
    }
  });
}

Var ConcatCols(const std::vector<Var> &parts) {
  if (parts.empty()) throw DimensionError("concat of nothing");
  Tape &tape = TapeOf(parts.front());
  Eigen::Index cols = 0;
  const Eigen::Index rows = parts.front().rows();
  for (const Var &p : parts) {
    TapeOf(parts.front(), p);
    if (p.rows() != rows) throw DimensionError("concat_cols: row mismatch");
    cols += p.cols();
  }
  Eigen::MatrixXd out(rows, cols);
  std::vector<std::pair<int, Eigen::Index>> pieces;
  Eigen::Index at = 0;
  for (const Var &p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    pieces.emplace_back(p.id(), p.cols());
    at += p.cols();
  }
  return tape.Push(std::move(out), [pieces](Tape &t, int self) {
    const auto &g = t.GradOf(self);
    Eigen::Index offset = 0;
    for (const auto &[id, cols] : pieces) {
      t.AddGrad(id, g.middleCols(offset, cols));
      offset += cols;
    }
  });
}

Var Column(Var a, Eigen::Index j) {
  Tape &tape = TapeOf(a);
  if (j < 0 || j >= a.cols()) throw DimensionError("column index out of range");
  Eigen::MatrixXd out = a.value().col(j);
  const int ia = a.id();
  const Eigen::Index rows = a.rows(), cols = a.cols();
  return tape.Push(std::move(out), [ia, j, rows, cols](Tape &t, int self) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows, cols);
    g.col(j) = t.GradOf(self);
    t.AddGrad(ia, g);
  });
}

Var Sum(const std::vector<Var> &parts) {
  if (parts.empty()) throw DimensionError("sum of nothing");
  Tape &tape = TapeOf(parts.front());
  Eigen::MatrixXd out = parts.front().value();
  std::vector<int> ids{parts.front().id()};
  for (std::size_t i = 1; i < parts.size(); ++i) {
    TapeOf(parts.front(), parts[i]);
    RequireSameShape(parts.front(), parts[i], "sum");
    out += parts[i].value();
    ids.push_back(parts[i].id());
  }
  return tape.Push(std::move(out), [ids](Tape &t, int self) {
    const Eigen::MatrixXd g = t.GradOf(self);
    for (int id : ids) t.AddGrad(id, g);
  });
}

Var Softmax(Var logits) {
  Tape &tape = TapeOf(logits);
  const auto &z = logits.value();
  if (z.size() == 0 || (z.rows() != 1 && z.cols() != 1)) {
    throw DimensionError("softmax expects a non-empty vector");
  }
  Eigen::MatrixXd out = (z.array() - z.maxCoeff()).exp().matrix();
  out /= out.sum();
  const int ia = logits.id();
  return tape.Push(std::move(out), [ia](Tape &t, int self) {
    const auto &p = t.value(self);
    const auto &g = t.GradOf(self);
    const double dot = g.cwiseProduct(p).sum();
    Eigen::MatrixXd gz = p.array() * (g.array() - dot);
    t.AddGrad(ia, gz);
  });
}

Var CrossEntropy(Var probabilities, Eigen::Index gold) {
  Tape &tape = TapeOf(probabilities);
  const auto &p = probabilities.value();
  if (gold < 0 || gold >= p.size()) {
    throw DimensionError("gold index " + std::to_string(gold) +
                         " out of range");
  }
  const double pg = p.data()[gold];
  const bool clamped = pg < kProbabilityFloor;
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = -std::log(clamped ? kProbabilityFloor : pg);
  const int ia = probabilities.id();
  const Eigen::Index rows = p.rows(), cols = p.cols();
  return tape.Push(std::move(out), [=](Tape &t, int self) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows, cols);
    if (!clamped) g.data()[gold] = -t.GradOf(self)(0, 0) / pg;
    t.AddGrad(ia, g);
  });
}

Var SoftmaxCrossEntropy(Var logits, Eigen::Index gold) {
  Tape &tape = TapeOf(logits);
  const auto &z = logits.value();
  if (z.size() == 0 || (z.rows() != 1 && z.cols() != 1)) {
    throw DimensionError("softmax expects a non-empty vector");
  }
  if (gold < 0 || gold >= z.size()) {
    throw DimensionError("gold index " + std::to_string(gold) +
                         " out of range");
  }
  const double max = z.maxCoeff();
  Eigen::MatrixXd p = (z.array() - max).exp().matrix();
  const double total = p.sum();
  p /= total;
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = std::log(total) + max - z.data()[gold];
  const int ia = logits.id();
  return tape.Push(std::move(out),
                   [ia, gold, p = std::move(p)](Tape &t, int self) {
                     Eigen::MatrixXd g = p;
                     g.data()[gold] -= 1.0;
                     t.AddGrad(ia, g * t.GradOf(self)(0, 0));
                   });
}

}  // namespace framelstm::neural
