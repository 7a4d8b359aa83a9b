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

#include "framelstm/neural/optimizer.h"

#include <cmath>
#include <stdexcept>

namespace framelstm::neural {

AdamState MakeAdamState(const ParameterSet &params, AdamOptions options) {
  AdamState state;
  state.options = options;
  for (const auto &p : params) {
    state.first_moment.push_back(
        Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
    state.second_moment.push_back(
        Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
  }
  return state;
}

void AdamStep(ParameterSet &params, AdamState &state) {
  if (state.first_moment.size() != params.size()) {
    throw std::invalid_argument("Adam state does not match parameter set");
  }
  const auto &o = state.options;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);
  std::size_t k = 0;
  for (auto &p : params) {
    auto &m = state.first_moment[k];
    auto &v = state.second_moment[k];
    ++k;
    if (m.rows() != p.value.rows() || m.cols() != p.value.cols()) {
      throw std::invalid_argument("Adam moment shape mismatch for '" +
                                  p.name + "'");
    }
    m = o.beta1 * m + (1.0 - o.beta1) * p.grad;
    v = o.beta2 * v + (1.0 - o.beta2) * p.grad.cwiseAbs2();
    p.value.array() -= o.learning_rate * (m.array() / correction1) /
                       ((v.array() / correction2).sqrt() + o.epsilon);
    p.grad.setZero();
  }
}

void SgdStep(ParameterSet &params, double learning_rate) {
  for (auto &p : params) {
    p.value -= learning_rate * p.grad;
    p.grad.setZero();
  }
}

}  // namespace framelstm::neural
