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

// Evaluation: reconstruction error, mode coverage, the inception-score
// analog, the importance-weighted log-likelihood bound and the
// generator-gradient probe.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "svae/data.hpp"
#include "svae/models.hpp"
#include "svae/objectives.hpp"

namespace svae {

// Fields that need an encoder are empty for decoder-only models.
struct MetricsRecord {
  std::size_t step = 0;
  std::optional<double> mse;
  std::size_t modes_covered = 0;
  double high_quality_fraction = 0.0;
  double is_analog = 1.0;
  std::optional<double> iw_loglik;
  double skl_estimate = 0.0;
  std::optional<double> gen_grad_norm_raw_f;
  std::optional<double> gen_grad_norm_log_sigmoid;

  // Throws DomainError when a bound in the record's invariants fails.
  void check(std::size_t n_components) const;
};

// Mean of ||x - decode_mean(encode_mean(x))||^2 with noise switched off.
double reconstruction_mse(const ModelTriple& triple, const PointSet& eval_set);

struct ModeCoverage {
  std::size_t modes_covered = 0;
  double high_quality_fraction = 0.0;
};

// A point is high quality when its Mahalanobis distance to some component
// mean is at most threshold_sigmas; such points are assigned to the nearest
// such component. A mode is covered when at least min_mass of all points are
// assigned to it.
ModeCoverage mode_coverage(const PointSet& generated, const GmmDensity& gmm,
                           double threshold_sigmas = 3.0,
                           double min_mass = 0.01);

// exp(mean_x KL(r(.|x) || rbar)) with r the GMM responsibilities.
double inception_score_analog(const PointSet& generated, const GmmDensity& gmm);

struct IwEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  // Per-point log((1/k) sum_j w_j).
  std::vector<double> per_point;
};

// Importance-weighted lower bound on the mean log-likelihood with k encoder
// draws per point. Requires an encoder.
IwEstimate iw_loglik(const ModelTriple& triple, const PointSet& eval_set,
                     std::size_t k, std::uint64_t seed);

// Ancestral samples x ~ p(x|z), z ~ p(z), including decoder noise.
PointSet generate_samples(const ModelTriple& triple, std::size_t n,
                          std::mt19937_64& rng);

// Metrics of one evaluation point on `real` rows and `n_generated` model
// samples. Gradient-norm fields are left empty.
MetricsRecord evaluate_metrics(const ModelTriple& triple, const PointSet& real,
                               const GmmDensity& gmm, std::size_t n_generated,
                               std::size_t iw_samples, std::mt19937_64& rng);

struct ProbeConfig {
  double discriminator_learning_rate = 1e-3;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

struct ProbeEntry {
  std::size_t k = 0;
  bool ok = false;
  std::string error;
  // Generator gradient norms on the same batch and discriminator.
  double raw_f_norm = 0.0;
  // Saddle-point form -E_q log sigmoid(-f) - E_p log sigmoid(f): the
  // generator side of the two-player sigmoid game.
  double log_sigmoid_norm = 0.0;
  // Non-saturating form E_q log sigmoid(f) + E_p log sigmoid(-f).
  double non_saturating_norm = 0.0;
};

// Trains a copy of the discriminator on the fixed batch with g(psi), taking
// the extra step counts in increasing order, and reports the generator
// gradient norms after each count. The caller's triple is not modified.
std::vector<ProbeEntry> gradient_norm_probe(const ModelTriple& triple,
                                            const BatchPair& batch,
                                            std::vector<std::size_t> extra_disc_steps,
                                            const ProbeConfig& config = {});

}  // namespace svae
