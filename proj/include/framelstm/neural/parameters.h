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

#ifndef FRAMELSTM_NEURAL_PARAMETERS_H_
#define FRAMELSTM_NEURAL_PARAMETERS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <string_view>

namespace framelstm::neural {

class Tape;

struct Parameter {
  std::string name;  // unique dotted path, e.g. "layer1.fwd.W_i"
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;  // same shape as value
};

enum class InitScheme { kGlorotUniform, kZeros, kForgetBiasOne };

// Throws std::invalid_argument for an unknown name.
InitScheme ParseInitScheme(std::string_view name);

// glorot_uniform draws from +-sqrt(6 / (fan_in + fan_out)) with fan_in =
// cols and fan_out = rows. The stream is seeded from (seed, name).
Eigen::MatrixXd InitParams(Eigen::Index rows, Eigen::Index cols,
                           uint64_t seed, InitScheme scheme,
                           std::string_view name);

// Named parameters in insertion order. Element addresses are stable.
class ParameterSet {
 public:
  using Container = std::deque<Parameter>;

  Parameter &Add(const std::string &name, Eigen::MatrixXd value);
  Parameter &Add(const std::string &name, Eigen::Index rows,
                 Eigen::Index cols, uint64_t seed, InitScheme scheme);

  const Parameter &Get(std::string_view name) const;
  Parameter &Get(std::string_view name);
  const Parameter *Find(std::string_view name) const;

  std::size_t size() const { return params_.size(); }
  Eigen::Index TotalSize() const;

  Container::iterator begin() { return params_.begin(); }
  Container::iterator end() { return params_.end(); }
  Container::const_iterator begin() const { return params_.begin(); }
  Container::const_iterator end() const { return params_.end(); }

  void ZeroGrad();
  void ScaleGrad(double factor);

  // Adds the parameter gradients recorded on `tape` after Backward. Every
  // parameter bound on the tape must belong to this set.
  void AccumulateGradients(const Tape &tape);

  // Copies values from `other`, which must have identical names and shapes.
  void CopyValuesFrom(const ParameterSet &other);

 private:
  Container params_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace framelstm::neural

#endif  // FRAMELSTM_NEURAL_PARAMETERS_H_
