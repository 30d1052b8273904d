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

#include "svae/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svae/error.hpp"

namespace svae {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // ln(2 pi)

void require_dim(const char* op, std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw ShapeError(std::string(op) + ": dimension mismatch (" +
                     std::to_string(expected) + " vs " + std::to_string(got) +
                     ")");
  }
}

}  // namespace

DiagonalGaussian::DiagonalGaussian(std::vector<double> mean,
                                   std::vector<double> log_variance)
    : mean_(std::move(mean)), log_variance_(std::move(log_variance)) {
  require_dim("DiagonalGaussian", mean_.size(), log_variance_.size());
  for (double lv : log_variance_) {
    if (!std::isfinite(lv)) {
      throw DomainError("DiagonalGaussian: log-variance must be finite");
    }
  }
}

DiagonalGaussian DiagonalGaussian::standard(std::size_t dim) {
  return DiagonalGaussian(std::vector<double>(dim, 0.0),
                          std::vector<double>(dim, 0.0));
}

double gaussian_log_pdf(const DiagonalGaussian& g, std::span<const double> x) {
  require_dim("gaussian_log_pdf", g.dim(), x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - g.mean()[i];
    const double lv = g.log_variance()[i];
    acc += kLog2Pi + lv + diff * diff * std::exp(-lv);
  }
  return -0.5 * acc;
}

double gaussian_kl(const DiagonalGaussian& a, const DiagonalGaussian& b) {
  require_dim("gaussian_kl", a.dim(), b.dim());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double lva = a.log_variance()[i], lvb = b.log_variance()[i];
    const double diff = a.mean()[i] - b.mean()[i];
    acc += lvb - lva + (std::exp(lva) + diff * diff) * std::exp(-lvb) - 1.0;
  }
  return std::max(0.0, 0.5 * acc);
}

double symmetric_kl_gaussian(const DiagonalGaussian& a,
                             const DiagonalGaussian& b) {
  return gaussian_kl(a, b) + gaussian_kl(b, a);
}

std::vector<double> sample_reparameterized(const DiagonalGaussian& g,
                                           std::span<const double> eps) {
  require_dim("sample_reparameterized", g.dim(), eps.size());
  std::vector<double> out(g.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = g.mean()[i] + std::exp(0.5 * g.log_variance()[i]) * eps[i];
  }
  return out;
}

double gaussian_entropy(const DiagonalGaussian& g) {
  double acc = 0.0;
  for (double lv : g.log_variance()) acc += kLog2Pi + 1.0 + lv;
  return 0.5 * acc;
}

void GmmDensity::validate() const {
  if (weights.empty()) throw ConfigError("gmm: no components");
  if (means.size() != weights.size() || variances.size() != weights.size()) {
    throw ConfigError("gmm: weights, means and variances differ in length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("gmm: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("gmm: weights sum to " + std::to_string(total));
  }
  const std::size_t d = means.front().size();
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (means[k].size() != d || variances[k].size() != d) {
      throw ConfigError("gmm: component " + std::to_string(k) +
                        " has a different dimension");
    }
    for (double v : variances[k]) {
      if (!(v > 0.0)) throw ConfigError("gmm: non-positive variance");
    }
  }
}

DiagonalGaussian GmmDensity::component(std::size_t k) const {
  std::vector<double> lv(variances[k].size());
  std::transform(variances[k].begin(), variances[k].end(), lv.begin(),
                 [](double v) { return std::log(v); });
  return DiagonalGaussian(means[k], std::move(lv));
}

namespace {

std::vector<double> weighted_component_log_pdfs(const GmmDensity& m,
                                                std::span<const double> x) {
  require_dim("gmm_log_pdf", m.dim(), x.size());
  std::vector<double> terms(m.n_components());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - m.means[k][i];
      const double var = m.variances[k][i];
      acc += kLog2Pi + std::log(var) + diff * diff / var;
    }
    terms[k] = std::log(m.weights[k]) - 0.5 * acc;
  }
  return terms;
}

}  // namespace

double gmm_log_pdf(const GmmDensity& m, std::span<const double> x) {
  const auto terms = weighted_component_log_pdfs(m, x);
  const double top = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

std::vector<double> gmm_responsibilities(const GmmDensity& m,
                                         std::span<const double> x) {
  auto terms = weighted_component_log_pdfs(m, x);
  const double top = *std::max_element(terms.begin(), terms.end());
  double total = 0.0;
  for (double& t : terms) {
    t = std::exp(t - top);
    total += t;
  }
  for (double& t : terms) t /= total;
  return terms;
}

Var gaussian_log_pdf_rows(Var x, Var mean, Var log_variance) {
  const Var diff = x - mean;
  const Var mahalanobis = square(diff) * exp(-log_variance);
  return scale(add_scalar(row_sum(mahalanobis + log_variance),
                          kLog2Pi * static_cast<double>(x.value().cols())),
               -0.5);
}

Var reparameterize(Var mean, Var log_variance, Var eps) {
  return mean + exp(scale(log_variance, 0.5)) * eps;
}

}  // namespace svae
