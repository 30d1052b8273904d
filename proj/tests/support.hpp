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

// Helpers shared by the unit tests and the acceptance binary.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "svae/models.hpp"

namespace svae::testing {

// Affine Gaussian head: mean = W c + offset, fixed diagonal log-variance.
struct AffineHead {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd offset;  // out
  Eigen::VectorXd log_variance;  // out
};

inline ParameterSet affine_parameters(const AffineHead& head, const LogVarianceClamp& clamp) {
  const auto in = static_cast<std::size_t>(head.weight.cols());
  const auto out = static_cast<std::size_t>(head.weight.rows());
  std::vector<double> w(in * 2 * out, 0.0), b(2 * out, 0.0);
  for (std::size_t i = 0; i < in; ++i) {
    for (std::size_t o = 0; o < out; ++o) {
      w[i * 2 * out + o] = head.weight(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i));
    }
  }
  for (std::size_t o = 0; o < out; ++o) {
    b[o] = head.offset(static_cast<Eigen::Index>(o));
    b[out + o] = clamp.inverse(head.log_variance(static_cast<Eigen::Index>(o)));
  }
  ParameterSet p;
  p.names = {"layer0.weight", "layer0.bias"};
  p.tensors = {Tensor::matrix(in, 2 * out, w), Tensor::vector(b)};
  return p;
}

// A model whose encoder and decoder are single affine layers.
inline ModelTriple affine_triple(const AffineHead& encoder, const AffineHead& decoder) {
  const auto x_dim = static_cast<std::size_t>(decoder.weight.rows());
  const auto z_dim = static_cast<std::size_t>(decoder.weight.cols());
  ModelConfig c = ModelConfig::toy_default(x_dim, z_dim, false);
  c.encoder = ModelConfig::gaussian_head_spec(x_dim, z_dim, {}, Activation::kIdentity);
  c.decoder = ModelConfig::gaussian_head_spec(z_dim, x_dim, {}, Activation::kIdentity);
  c.discriminator = ModelConfig::critic_spec(x_dim + z_dim, {8}, Activation::kRelu);
  ModelTriple t = ModelTriple::initialize(c, 0);
  t.encoder = affine_parameters(encoder, c.clamp);
  t.decoder = affine_parameters(decoder, c.clamp);
  return t;
}

// Linear-Gaussian decoder p(x|z) = N(diag(a) z + b, sigma^2 I) with dx = dz,
// paired with its exact posterior p(z|x) as the encoder.
struct ExactPosteriorModel {
  ModelTriple triple;
  Eigen::VectorXd marginal_mean;
  Eigen::VectorXd marginal_variance;  // p(x) is diagonal here
  double log_marginal(const Eigen::VectorXd& x) const {
    double lp = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double v = marginal_variance(i);
      const double d = x(i) - marginal_mean(i);
      lp += -0.5 * (std::log(2.0 * 3.14159265358979323846 * v) + d * d / v);
    }
    return lp;
  }
};

inline ExactPosteriorModel exact_posterior_model(const Eigen::VectorXd& a,
                                                 const Eigen::VectorXd& b, double sigma) {
  const auto n = a.size();
  const double s2 = sigma * sigma;
  AffineHead dec{Eigen::MatrixXd(a.asDiagonal()), b,
                 Eigen::VectorXd::Constant(n, std::log(s2))};
  // Posterior precision 1 + a^2 / s2 per coordinate.
  Eigen::VectorXd post_var(n), gain(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    post_var(i) = 1.0 / (1.0 + a(i) * a(i) / s2);
    gain(i) = post_var(i) * a(i) / s2;
  }
  AffineHead enc{Eigen::MatrixXd(gain.asDiagonal()), -gain.cwiseProduct(b),
                 post_var.array().log().matrix()};
  ExactPosteriorModel m;
  m.triple = affine_triple(enc, dec);
  m.marginal_mean = b;
  m.marginal_variance = a.cwiseProduct(a).array() + s2;
  return m;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace svae::testing
