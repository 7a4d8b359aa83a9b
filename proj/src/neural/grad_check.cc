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

#include "framelstm/neural/grad_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "framelstm/random.h"

namespace framelstm::neural {

namespace {

double Evaluate(const LossFunction &loss) {
  Tape tape;
  return loss(tape).scalar();
}

std::vector<Eigen::Index> SampleCoordinates(Eigen::Index size, int limit,
                                            uint64_t seed,
                                            const std::string &name) {
  std::vector<Eigen::Index> coords(size);
  std::iota(coords.begin(), coords.end(), 0);
  if (limit <= 0 || size <= limit) return coords;
  Rng rng(MixSeed(seed, name));
  Shuffle(coords, rng);
  coords.resize(limit);
  std::sort(coords.begin(), coords.end());
  return coords;
}

}  // namespace

GradCheckResult GradCheck(const LossFunction &loss, ParameterSet &params,
                          const GradCheckOptions &options) {
  return GradCheck(
      loss, [&]() -> long double { return Evaluate(loss); }, params, options);
}

GradCheckResult GradCheck(const LossFunction &loss, const NumericLoss &numeric,
                          ParameterSet &params,
                          const GradCheckOptions &options) {
  if (!(options.epsilon > 0)) {
    throw std::invalid_argument("gradient check epsilon must be positive");
  }
  params.ZeroGrad();
  {
    Tape tape;
    Var value = loss(tape);
    tape.Backward(value);
    // Parameters outside `params` may feed the loss; they are held fixed.
    for (const auto &[param, grad] : tape.ParameterGradients()) {
      if (params.Find(param->name) == param) params.Get(param->name).grad += grad;
    }
  }

  GradCheckResult result;
  const double eps = options.epsilon;
  for (auto &p : params) {
    const Eigen::MatrixXd analytic = p.grad * options.gradient_scale;
    for (Eigen::Index k : SampleCoordinates(
             p.value.size(), options.max_coords_per_param, options.seed,
             p.name)) {
      double &theta = p.value.data()[k];
      const double saved = theta;
      const double up = saved + eps;
      const double down = saved - eps;
      theta = up;
      const long double plus = numeric();
      theta = down;
      const long double minus = numeric();
      theta = saved;

      // The realized step, which differs from 2 eps by rounding of theta.
      const long double step =
          static_cast<long double>(up) - static_cast<long double>(down);
      const double n = static_cast<double>((plus - minus) / step);
      const double a = analytic.data()[k];
      const double error =
          std::abs(a - n) / std::max(1e-8, std::abs(a) + std::abs(n));
      ++result.coordinates_checked;
      if (error > result.max_relative_error || result.worst_index < 0) {
        result.max_relative_error = error;
        result.worst_parameter = p.name;
        result.worst_index = k;
      }
    }
  }
  params.ZeroGrad();
  return result;
}

}  // namespace framelstm::neural
