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

#include "svae/tensor.hpp"

namespace svae {

// Gaussian with diagonal covariance, parameterized by mean and log-variance.
class DiagonalGaussian {
 public:
  DiagonalGaussian(std::vector<double> mean, std::vector<double> log_variance);

  static DiagonalGaussian standard(std::size_t dim);

  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& log_variance() const { return log_variance_; }

 private:
  std::vector<double> mean_;
  std::vector<double> log_variance_;
};

double gaussian_log_pdf(const DiagonalGaussian& g, std::span<const double> x);

// KL(a || b), closed form.
double gaussian_kl(const DiagonalGaussian& a, const DiagonalGaussian& b);

// KL(a || b) + KL(b || a).
double symmetric_kl_gaussian(const DiagonalGaussian& a,
                             const DiagonalGaussian& b);

// mean + exp(log_variance / 2) * eps.
std::vector<double> sample_reparameterized(const DiagonalGaussian& g,
                                           std::span<const double> eps);

// Differential entropy in nats.
double gaussian_entropy(const DiagonalGaussian& g);

// Mixture of diagonal Gaussians.
struct GmmDensity {
  std::vector<double> weights;
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> variances;

  // Throws ConfigError unless weights sum to one, variances are positive and
  // every component has the same dimension.
  void validate() const;
  std::size_t n_components() const { return weights.size(); }
  std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
  DiagonalGaussian component(std::size_t k) const;
};

double gmm_log_pdf(const GmmDensity& m, std::span<const double> x);

// Posterior component probabilities r(k | x).
std::vector<double> gmm_responsibilities(const GmmDensity& m,
                                         std::span<const double> x);

// Row-wise differentiable forms used by the objectives. `x`, `mean` and
// `log_variance` are [n, d]; the result is the [n] vector of log-densities.
Var gaussian_log_pdf_rows(Var x, Var mean, Var log_variance);

// mean + exp(log_variance / 2) * eps, all [n, d].
Var reparameterize(Var mean, Var log_variance, Var eps);

}  // namespace svae
