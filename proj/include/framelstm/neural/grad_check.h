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

#ifndef FRAMELSTM_NEURAL_GRAD_CHECK_H_
#define FRAMELSTM_NEURAL_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>

#include "framelstm/neural/autodiff.h"
#include "framelstm/neural/parameters.h"

namespace framelstm::neural {

struct GradCheckOptions {
  double epsilon = 1e-5;
  // Coordinates per parameter beyond this are sub-sampled (seeded).
  int max_coords_per_param = 500;
  uint64_t seed = 0;
  // Multiplies the analytic gradient before comparison. Anything other than
  // 1 deliberately breaks the check; used to exercise the failure path.
  double gradient_scale = 1.0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  Eigen::Index worst_index = -1;
  std::size_t coordinates_checked = 0;
};

// Records the scalar loss on the given tape.
using LossFunction = std::function<Var(Tape &)>;

// Compares backward gradients with central differences
// (f(x + eps) - f(x - eps)) / 2 eps and reports the largest
// |a - n| / max(1e-8, |a| + |n|). Parameter values are restored; gradients
// are left zeroed. Only `params` are checked; other parameters the loss
// reads are held fixed.
GradCheckResult GradCheck(const LossFunction &loss, ParameterSet &params,
                          const GradCheckOptions &options = {});

// Tape-free evaluation of the same loss from the current parameter values.
using NumericLoss = std::function<long double()>;

// As above, but the central differences come from `numeric`. Evaluating it in
// extended precision keeps roundoff in f(x + eps) - f(x - eps) well below
// the smallest gradients of a full model.
GradCheckResult GradCheck(const LossFunction &loss, const NumericLoss &numeric,
                          ParameterSet &params,
                          const GradCheckOptions &options = {});

}  // namespace framelstm::neural

#endif  // FRAMELSTM_NEURAL_GRAD_CHECK_H_
