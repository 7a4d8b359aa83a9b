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

#ifndef FRAMELSTM_NEURAL_OPTIMIZER_H_
#define FRAMELSTM_NEURAL_OPTIMIZER_H_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "framelstm/neural/parameters.h"

namespace framelstm::neural {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment estimates, one pair per parameter in set order.
struct AdamState {
  AdamOptions options;
  int64_t step = 0;
  std::vector<Eigen::MatrixXd> first_moment;
  std::vector<Eigen::MatrixXd> second_moment;
};

AdamState MakeAdamState(const ParameterSet &params, AdamOptions options = {});

// Bias-corrected Adam update, then zeroes the gradients.
void AdamStep(ParameterSet &params, AdamState &state);

// theta -= lr * grad, then zeroes the gradients.
void SgdStep(ParameterSet &params, double learning_rate);

}  // namespace framelstm::neural

#endif  // FRAMELSTM_NEURAL_OPTIMIZER_H_
