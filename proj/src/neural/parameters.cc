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

#include "framelstm/neural/parameters.h"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "framelstm/neural/autodiff.h"
#include "framelstm/random.h"

namespace framelstm::neural {

InitScheme ParseInitScheme(std::string_view name) {
  if (name == "glorot_uniform") return InitScheme::kGlorotUniform;
  if (name == "zeros") return InitScheme::kZeros;
  if (name == "forget_bias_one") return InitScheme::kForgetBiasOne;
  throw std::invalid_argument("unknown init scheme '" + std::string(name) +
                              "'");
}

Eigen::MatrixXd InitParams(Eigen::Index rows, Eigen::Index cols,
                           uint64_t seed, InitScheme scheme,
                           std::string_view name) {
  switch (scheme) {
    case InitScheme::kZeros:
      return Eigen::MatrixXd::Zero(rows, cols);
    case InitScheme::kForgetBiasOne:
      return Eigen::MatrixXd::Ones(rows, cols);
    case InitScheme::kGlorotUniform: {
      const double bound =
          std::sqrt(6.0 / static_cast<double>(rows + cols));
      Rng rng(MixSeed(seed, name));
      Eigen::MatrixXd m(rows, cols);
      // Column-major fill order is part of the determinism contract.
      for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
          m(i, j) = UniformReal(rng, -bound, bound);
        }
      }
      return m;
    }
  }
  throw std::invalid_argument("unknown init scheme");
}

Parameter &ParameterSet::Add(const std::string &name, Eigen::MatrixXd value) {
  if (index_.count(name)) {
    throw std::invalid_argument("duplicate parameter name '" + name + "'");
  }
  index_.emplace(name, params_.size());
  Parameter &p = params_.emplace_back();
  p.name = name;
  p.grad = Eigen::MatrixXd::Zero(value.rows(), value.cols());
  p.value = std::move(value);
  return p;
}

Parameter &ParameterSet::Add(const std::string &name, Eigen::Index rows,
                             Eigen::Index cols, uint64_t seed,
                             InitScheme scheme) {
  return Add(name, InitParams(rows, cols, seed, scheme, name));
}

const Parameter *ParameterSet::Find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &params_[it->second];
}

const Parameter &ParameterSet::Get(std::string_view name) const {
  const Parameter *p = Find(name);
  if (!p) {
    throw std::out_of_range("no parameter named '" + std::string(name) + "'");
  }
  return *p;
}

Parameter &ParameterSet::Get(std::string_view name) {
  return const_cast<Parameter &>(std::as_const(*this).Get(name));
}

Eigen::Index ParameterSet::TotalSize() const {
  Eigen::Index total = 0;
  for (const auto &p : params_) total += p.value.size();
  return total;
}

void ParameterSet::ZeroGrad() {
  for (auto &p : params_) p.grad.setZero();
}

void ParameterSet::ScaleGrad(double factor) {
  for (auto &p : params_) p.grad *= factor;
}

void ParameterSet::AccumulateGradients(const Tape &tape) {
  for (const auto &[param, grad] : tape.ParameterGradients()) {
    auto it = index_.find(param->name);
    if (it == index_.end() || &params_[it->second] != param) {
      throw std::invalid_argument("tape gradient for foreign parameter '" +
                                  param->name + "'");
    }
    params_[it->second].grad += grad;
  }
}

void ParameterSet::CopyValuesFrom(const ParameterSet &other) {
  if (other.size() != size()) {
    throw std::invalid_argument("parameter sets differ in size");
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto &src = other.params_[i];
    auto &dst = params_[i];
    if (src.name != dst.name || src.value.rows() != dst.value.rows() ||
        src.value.cols() != dst.value.cols()) {
      throw std::invalid_argument("parameter sets differ at '" + dst.name +
                                  "'");
    }
    dst.value = src.value;
  }
}

}  // namespace framelstm::neural
