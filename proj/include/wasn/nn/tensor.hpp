// wasn/nn/tensor.hpp
//
// Copyright 2026  The wasn-enhance Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef WASN_NN_TENSOR_HPP
#define WASN_NN_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "wasn/common.hpp"

namespace wasn::nn {

// Dense row-major tensor of doubles. Shape is advisory; layers index flat.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    data.assign(numel_of(shape), 0.0);
  }

  static std::size_t numel_of(const std::vector<int>& s) {
    std::size_t n = 1;
    for (int d : s) n *= static_cast<std::size_t>(d);
    return n;
  }

  std::size_t numel() const { return data.size(); }
  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }
  void fill(double v) { std::fill(data.begin(), data.end(), v); }
  void zero() { fill(0.0); }

  double& at2(int i, int j) { return data[static_cast<std::size_t>(i) * shape[1] + j]; }
  double at2(int i, int j) const {
    return data[static_cast<std::size_t>(i) * shape[1] + j];
  }
};

// Trainable parameter with its gradient and momentum state.
struct ParamTensor {
  Tensor value;
  Tensor grad;
  Tensor vel;

  void init_shape(std::vector<int> s) {
    value = Tensor(s);
    grad = Tensor(s);
    vel = Tensor(std::move(s));
  }
  void zero_grad() { grad.zero(); }
};

}  // namespace wasn::nn

#endif  // WASN_NN_TENSOR_HPP
