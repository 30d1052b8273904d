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

// Linear-Gaussian encoder/decoder pairs. Both joints
//   p(x, z) = N(z; 0, I) N(x; A z + b, sigma^2 I)
//   q(x, z) = N(x; m, diag S) N(z; C x + d, tau^2 I)
// are exact Gaussians, so every divergence between them, their marginals and
// their conditionals has a closed form.

#include <Eigen/Dense>
#include <cstddef>
#include <random>

namespace svae {

struct FullGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
  double log_pdf(const Eigen::VectorXd& x) const;
  Eigen::VectorXd sample(std::mt19937_64& rng) const;
};

// KL(a || b).
double full_gaussian_kl(const FullGaussian& a, const FullGaussian& b);

// KL(a || b) + KL(b || a) from the direct symmetric formula, in which the
// log-determinants cancel.
double full_gaussian_symmetric_kl(const FullGaussian& a, const FullGaussian& b);

// y | c ~ N(gain c + offset, covariance).
struct AffineGaussian {
  Eigen::MatrixXd gain;
  Eigen::VectorXd offset;
  Eigen::MatrixXd covariance;

  FullGaussian at(const Eigen::VectorXd& c) const;
};

// KL between two conditionals that share the conditioning point. Covariances
// do not depend on the point, so the trace and determinant terms are
// factored once.
class ConditionalKl {
 public:
  ConditionalKl(const AffineGaussian& a, const AffineGaussian& b);
  double operator()(const Eigen::VectorXd& c) const;

 private:
  AffineGaussian a_, b_;
  Eigen::LLT<Eigen::MatrixXd> b_chol_;
  double constant_ = 0.0;
};

struct LinearGaussianSpec {
  Eigen::MatrixXd A;   // dx x dz
  Eigen::VectorXd b;   // dx
  double sigma = 1.0;
  Eigen::MatrixXd C;   // dz x dx
  Eigen::VectorXd d;   // dz
  double tau = 1.0;
  Eigen::VectorXd m;   // dx
  Eigen::VectorXd S;   // dx, diagonal of the data covariance

  std::size_t dx() const { return static_cast<std::size_t>(b.size()); }
  std::size_t dz() const { return static_cast<std::size_t>(d.size()); }

  // Throws ShapeError/DomainError for non-conforming or degenerate models.
  void validate() const;

  // p and q coincide: A = C = 0, b = d = 0, sigma = tau = 1, q(x) = N(0, I).
  static LinearGaussianSpec matched(std::size_t dx, std::size_t dz);
  // Moderately mismatched random model.
  static LinearGaussianSpec random(std::size_t dx, std::size_t dz,
                                   std::mt19937_64& rng);

  // Joints over the stacked vector [x; z].
  FullGaussian joint_p() const;
  FullGaussian joint_q() const;

  FullGaussian prior_z() const;   // p(z)
  FullGaussian data_x() const;    // q(x)
  FullGaussian marginal_x() const;  // p(x)
  FullGaussian aggregate_z() const;  // q(z)

  AffineGaussian decoder() const;         // p(x | z)
  AffineGaussian encoder() const;         // q(z | x)
  AffineGaussian posterior_z() const;     // p(z | x)
  AffineGaussian data_posterior_x() const;  // q(x | z)
};

// Draws (x, z) from either joint by ancestral sampling.
struct JointSample {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
};
JointSample sample_joint_p(const LinearGaussianSpec& spec, std::mt19937_64& rng);
JointSample sample_joint_q(const LinearGaussianSpec& spec, std::mt19937_64& rng);

Eigen::VectorXd standard_normal(std::size_t n, std::mt19937_64& rng);

}  // namespace svae
