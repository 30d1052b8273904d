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

#include "svae/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svae/error.hpp"

namespace svae {

AdamState AdamState::zeros_like(const ParameterSet& params) {
  AdamState s;
  for (const auto& t : params.tensors) {
    s.first_moment.push_back(Tensor::zeros(t.shape()));
    s.second_moment.push_back(Tensor::zeros(t.shape()));
  }
  return s;
}

void adam_step(AdamState& state, ParameterSet& params,
               std::span<const Tensor> grads, const AdamHyper& hyper) {
  if (grads.size() != params.size()) {
    throw ConfigError("adam_step: expected " + std::to_string(params.size()) +
                      " gradients, got " + std::to_string(grads.size()));
  }
  if (state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state does not match the parameters");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& shape = params.tensors[i].shape();
    if (grads[i].shape() != shape) {
      throw ShapeError("adam_step: gradient for '" + params.names[i] +
                       "' is missing or has shape " +
                       shape_string(grads[i].shape()) + ", expected " +
                       shape_string(shape));
    }
    if (state.first_moment[i].shape() != shape ||
        state.second_moment[i].shape() != shape) {
      throw ShapeError("adam_step: moment shape mismatch for '" +
                       params.names[i] + "'");
    }
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(hyper.beta1, t);
  const double c2 = 1.0 - std::pow(hyper.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params.tensors[i].data();
    double* m = state.first_moment[i].data();
    double* v = state.second_moment[i].data();
    const double* g = grads[i].data();
    const std::size_t n = params.tensors[i].size();
    for (std::size_t j = 0; j < n; ++j) {
      m[j] = hyper.beta1 * m[j] + (1.0 - hyper.beta1) * g[j];
      v[j] = hyper.beta2 * v[j] + (1.0 - hyper.beta2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      p[j] -= hyper.learning_rate * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
    }
  }
}

void clip_parameters(ParameterSet& params, double c) {
  if (!(c > 0.0)) throw ConfigError("clip_parameters: c must be > 0");
  for (auto& t : params.tensors) {
    double* p = t.data();
    for (std::size_t j = 0; j < t.size(); ++j) p[j] = std::clamp(p[j], -c, c);
  }
}

double gradient_norm(std::span<const Tensor> grads) {
  double acc = 0.0;
  for (const auto& g : grads) {
    for (double v : g.values()) acc += v * v;
  }
  return std::sqrt(acc);
}

std::vector<Tensor> negated(std::span<const Tensor> grads) {
  std::vector<Tensor> out;
  out.reserve(grads.size());
  for (const auto& g : grads) {
    std::vector<double> v(g.values().begin(), g.values().end());
    for (double& x : v) x = -x;
    out.emplace_back(g.shape(), std::move(v));
  }
  return out;
}

}  // namespace svae
