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

#include "svae/linear_gaussian.hpp"

#include <cmath>
#include <string>

#include "svae/error.hpp"

namespace svae {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;

Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& cov,
                                     const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DomainError(std::string(what) + ": covariance is not positive definite");
  }
  return llt;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

void require_same_dim(const FullGaussian& a, const FullGaussian& b,
                      const char* what) {
  if (a.mean.size() != b.mean.size()) {
    throw ShapeError(std::string(what) + ": dimension mismatch (" +
                     std::to_string(a.mean.size()) + " vs " +
                     std::to_string(b.mean.size()) + ")");
  }
}

}  // namespace

double FullGaussian::log_pdf(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size()) throw ShapeError("log_pdf: dimension mismatch");
  const auto llt = cholesky(covariance, "log_pdf");
  const Eigen::VectorXd white = llt.matrixL().solve(x - mean);
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + log_det(llt) +
                 white.squaredNorm());
}

Eigen::VectorXd FullGaussian::sample(std::mt19937_64& rng) const {
  const auto llt = cholesky(covariance, "sample");
  return mean + llt.matrixL() * standard_normal(dim(), rng);
}

double full_gaussian_kl(const FullGaussian& a, const FullGaussian& b) {
  require_same_dim(a, b, "full_gaussian_kl");
  const auto la = cholesky(a.covariance, "full_gaussian_kl");
  const auto lb = cholesky(b.covariance, "full_gaussian_kl");
  const Eigen::VectorXd diff = b.mean - a.mean;
  const double trace = lb.solve(a.covariance).trace();
  const double quad = diff.dot(lb.solve(diff));
  const double k = static_cast<double>(a.mean.size());
  return 0.5 * (trace + quad - k + log_det(lb) - log_det(la));
}

double full_gaussian_symmetric_kl(const FullGaussian& a,
                                  const FullGaussian& b) {
  require_same_dim(a, b, "full_gaussian_symmetric_kl");
  const auto la = cholesky(a.covariance, "full_gaussian_symmetric_kl");
  const auto lb = cholesky(b.covariance, "full_gaussian_symmetric_kl");
  const Eigen::VectorXd diff = b.mean - a.mean;
  const double k = static_cast<double>(a.mean.size());
  const double traces =
      lb.solve(a.covariance).trace() + la.solve(b.covariance).trace();
  const double quad = diff.dot(la.solve(diff) + lb.solve(diff));
  return 0.5 * (traces - 2.0 * k + quad);
}

FullGaussian AffineGaussian::at(const Eigen::VectorXd& c) const {
  return {gain * c + offset, covariance};
}

ConditionalKl::ConditionalKl(const AffineGaussian& a, const AffineGaussian& b)
    : a_(a), b_(b), b_chol_(cholesky(b.covariance, "ConditionalKl")) {
  const auto la = cholesky(a.covariance, "ConditionalKl");
  const double k = static_cast<double>(a.offset.size());
  constant_ = 0.5 * (b_chol_.solve(a.covariance).trace() - k +
                     log_det(b_chol_) - log_det(la));
}

double ConditionalKl::operator()(const Eigen::VectorXd& c) const {
  const Eigen::VectorXd diff =
      (a_.gain - b_.gain) * c + (a_.offset - b_.offset);
  return constant_ + 0.5 * diff.dot(b_chol_.solve(diff));
}

void LinearGaussianSpec::validate() const {
  const auto nx = b.size(), nz = d.size();
  if (nx == 0 || nz == 0) throw ShapeError("linear-gaussian: empty dimension");
  if (A.rows() != nx || A.cols() != nz) {
    throw ShapeError("linear-gaussian: A must be dx x dz");
  }
  if (C.rows() != nz || C.cols() != nx) {
    throw ShapeError("linear-gaussian: C must be dz x dx");
  }
  if (m.size() != nx || S.size() != nx) {
    throw ShapeError("linear-gaussian: m and S must have length dx");
  }
  if (!(sigma > 0.0) || !(tau > 0.0)) {
    throw DomainError("linear-gaussian: noise scales must be positive");
  }
  if (!(S.array() > 0.0).all()) {
    throw DomainError("linear-gaussian: data variances must be positive");
  }
}

LinearGaussianSpec LinearGaussianSpec::matched(std::size_t dx, std::size_t dz) {
  const auto nx = static_cast<Eigen::Index>(dx);
  const auto nz = static_cast<Eigen::Index>(dz);
  LinearGaussianSpec spec;
  spec.A = Eigen::MatrixXd::Zero(nx, nz);
  spec.b = Eigen::VectorXd::Zero(nx);
  spec.C = Eigen::MatrixXd::Zero(nz, nx);
  spec.d = Eigen::VectorXd::Zero(nz);
  spec.m = Eigen::VectorXd::Zero(nx);
  spec.S = Eigen::VectorXd::Ones(nx);
  return spec;
}

LinearGaussianSpec LinearGaussianSpec::random(std::size_t dx, std::size_t dz,
                                              std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto nx = static_cast<Eigen::Index>(dx);
  const auto nz = static_cast<Eigen::Index>(dz);
  auto fill = [&](Eigen::Index r, Eigen::Index c, double s) {
    Eigen::MatrixXd out(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) out(i, j) = s * normal(rng);
    return out;
  };
  LinearGaussianSpec spec;
  spec.A = fill(nx, nz, 0.7);
  spec.b = fill(nx, 1, 0.5).col(0);
  spec.sigma = 0.5 + 0.7 * unit(rng);
  spec.C = fill(nz, nx, 0.5);
  spec.d = fill(nz, 1, 0.5).col(0);
  spec.tau = 0.5 + 0.7 * unit(rng);
  spec.m = fill(nx, 1, 0.5).col(0);
  spec.S = Eigen::VectorXd(nx);
  for (Eigen::Index i = 0; i < nx; ++i) spec.S(i) = 0.5 + 1.5 * unit(rng);
  return spec;
}

FullGaussian LinearGaussianSpec::joint_p() const {
  validate();
  const auto nx = b.size(), nz = d.size();
  FullGaussian g;
  g.mean = Eigen::VectorXd::Zero(nx + nz);
  g.mean.head(nx) = b;
  g.covariance = Eigen::MatrixXd::Zero(nx + nz, nx + nz);
  g.covariance.topLeftCorner(nx, nx) =
      A * A.transpose() + sigma * sigma * Eigen::MatrixXd::Identity(nx, nx);
  g.covariance.topRightCorner(nx, nz) = A;
  g.covariance.bottomLeftCorner(nz, nx) = A.transpose();
  g.covariance.bottomRightCorner(nz, nz) = Eigen::MatrixXd::Identity(nz, nz);
  return g;
}

FullGaussian LinearGaussianSpec::joint_q() const {
  validate();
  const auto nx = b.size(), nz = d.size();
  const Eigen::MatrixXd s = S.asDiagonal();
  FullGaussian g;
  g.mean = Eigen::VectorXd(nx + nz);
  g.mean.head(nx) = m;
  g.mean.tail(nz) = C * m + d;
  g.covariance = Eigen::MatrixXd(nx + nz, nx + nz);
  g.covariance.topLeftCorner(nx, nx) = s;
  g.covariance.topRightCorner(nx, nz) = s * C.transpose();
  g.covariance.bottomLeftCorner(nz, nx) = C * s;
  g.covariance.bottomRightCorner(nz, nz) =
      C * s * C.transpose() + tau * tau * Eigen::MatrixXd::Identity(nz, nz);
  return g;
}

FullGaussian LinearGaussianSpec::prior_z() const {
  return {Eigen::VectorXd::Zero(d.size()),
          Eigen::MatrixXd::Identity(d.size(), d.size())};
}

FullGaussian LinearGaussianSpec::data_x() const {
  return {m, S.asDiagonal()};
}

FullGaussian LinearGaussianSpec::marginal_x() const {
  const auto nx = b.size();
  return {b, A * A.transpose() +
                 sigma * sigma * Eigen::MatrixXd::Identity(nx, nx)};
}

FullGaussian LinearGaussianSpec::aggregate_z() const {
  const auto nz = d.size();
  const Eigen::MatrixXd s = S.asDiagonal();
  return {C * m + d,
          C * s * C.transpose() + tau * tau * Eigen::MatrixXd::Identity(nz, nz)};
}

AffineGaussian LinearGaussianSpec::decoder() const {
  const auto nx = b.size();
  return {A, b, sigma * sigma * Eigen::MatrixXd::Identity(nx, nx)};
}

AffineGaussian LinearGaussianSpec::encoder() const {
  const auto nz = d.size();
  return {C, d, tau * tau * Eigen::MatrixXd::Identity(nz, nz)};
}

AffineGaussian LinearGaussianSpec::posterior_z() const {
  const auto nz = d.size();
  const FullGaussian px = marginal_x();
  const Eigen::MatrixXd gain =
      px.covariance.llt().solve(A).transpose();  // A^T Sxx^-1
  AffineGaussian g;
  g.gain = gain;
  g.offset = -gain * b;
  g.covariance = Eigen::MatrixXd::Identity(nz, nz) - gain * A;
  g.covariance = 0.5 * (g.covariance + g.covariance.transpose());
  return g;
}

AffineGaussian LinearGaussianSpec::data_posterior_x() const {
  const FullGaussian qz = aggregate_z();
  const Eigen::MatrixXd s = S.asDiagonal();
  const Eigen::MatrixXd cross = s * C.transpose();  // Cov(x, z) under q
  const Eigen::MatrixXd gain = qz.covariance.llt().solve(cross.transpose()).transpose();
  AffineGaussian g;
  g.gain = gain;
  g.offset = m - gain * qz.mean;
  g.covariance = s - gain * cross.transpose();
  g.covariance = 0.5 * (g.covariance + g.covariance.transpose());
  return g;
}

Eigen::VectorXd standard_normal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal(rng);
  return out;
}

JointSample sample_joint_p(const LinearGaussianSpec& spec,
                           std::mt19937_64& rng) {
  JointSample s;
  s.z = standard_normal(spec.dz(), rng);
  s.x = spec.A * s.z + spec.b + spec.sigma * standard_normal(spec.dx(), rng);
  return s;
}

JointSample sample_joint_q(const LinearGaussianSpec& spec,
                           std::mt19937_64& rng) {
  JointSample s;
  s.x = spec.m +
        spec.S.cwiseSqrt().cwiseProduct(standard_normal(spec.dx(), rng));
  s.z = spec.C * s.x + spec.d + spec.tau * standard_normal(spec.dz(), rng);
  return s;
}

}  // namespace svae
