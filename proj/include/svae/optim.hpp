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

#include <cstddef>
#include <span>
#include <vector>

#include "svae/models.hpp"
#include "svae/tensor.hpp"

namespace svae {

struct AdamHyper {
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  std::size_t step_count = 0;

  // Zero moments shaped like `params`.
  static AdamState zeros_like(const ParameterSet& params);
};

// One bias-corrected Adam descent step on `grads`, which must match the
// parameter set tensor for tensor. To ascend, pass negated gradients.
void adam_step(AdamState& state, ParameterSet& params,
               std::span<const Tensor> grads, const AdamHyper& hyper);

// Clamps every scalar to [-c, c].
void clip_parameters(ParameterSet& params, double c);

// Euclidean norm over a list of gradient tensors.
double gradient_norm(std::span<const Tensor> grads);

std::vector<Tensor> negated(std::span<const Tensor> grads);

}  // namespace svae
