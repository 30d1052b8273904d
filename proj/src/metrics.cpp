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

#include "svae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svae/error.hpp"
#include "svae/optim.hpp"

namespace svae {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// log N(x; mean, diag exp(log_variance)) for one row.
double diag_log_pdf(const double* x, const double* mean, const double* lv,
                    std::size_t d) {
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = x[j] - mean[j];
    acc += kLog2Pi + lv[j] + diff * diff * std::exp(-lv[j]);
  }
  return -0.5 * acc;
}

double standard_log_pdf(const double* z, std::size_t d) {
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) acc += kLog2Pi + z[j] * z[j];
  return -0.5 * acc;
}

void require_nonempty(const PointSet& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string(what) + ": empty point set");
}

void require_encoder(const ModelTriple& triple, const char* what) {
  if (!triple.has_encoder()) {
    throw ConfigError(std::string(what) + ": the model has no encoder");
  }
}

// Objective spec carrying `transform` for the triple's encoder layout.
ObjectiveSpec probe_spec(const ModelTriple& triple, GeneratorTransform transform) {
  auto spec = ObjectiveSpec::make(
      triple.config.decoder_only ? Variant::kGan : Variant::kAli);
  spec.generator_transform = transform;
  return spec;
}

double generator_gradient_norm(const ModelTriple& triple, const BatchPair& batch,
                               GeneratorTransform transform) {
  auto phase = generator_objective(probe_spec(triple, transform), triple, batch);
  phase.backward();
  auto grads = collect_gradients(*phase.graph, phase.decoder);
  if (triple.has_encoder()) {
    auto enc = collect_gradients(*phase.graph, phase.encoder);
    grads.insert(grads.end(), enc.begin(), enc.end());
  }
  return gradient_norm(grads);
}

}  // namespace

void MetricsRecord::check(std::size_t n_components) const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (mse && !(*mse >= 0.0 && finite(*mse))) {
    throw DomainError("metrics: mse must be finite and >= 0");
  }
  if (!(high_quality_fraction >= 0.0 && high_quality_fraction <= 1.0)) {
    throw DomainError("metrics: high_quality_fraction outside [0, 1]");
  }
  if (modes_covered > n_components) {
    throw DomainError("metrics: modes_covered exceeds the component count");
  }
  const double k = static_cast<double>(n_components);
  if (!(is_analog >= 1.0 - 1e-9 && is_analog <= k + 1e-9)) {
    throw DomainError("metrics: is_analog outside [1, n_components]");
  }
  if ((iw_loglik && !finite(*iw_loglik)) || !finite(skl_estimate)) {
    throw DomainError("metrics: non-finite likelihood or divergence estimate");
  }
}

double reconstruction_mse(const ModelTriple& triple, const PointSet& eval_set) {
  require_nonempty(eval_set, "reconstruction_mse");
  require_encoder(triple, "reconstruction_mse");
  const auto& c = triple.config;
  if (eval_set.dim != c.x_dim) {
    throw ShapeError("reconstruction_mse: eval set dimension does not match x_dim");
  }
  const std::size_t n = eval_set.size();
  const Tensor x = eval_set.to_tensor();
  const auto enc = encode_batch(triple, x, Tensor::zeros({n, c.z_dim}));
  const auto dec = decode_batch(triple, enc.mean, Tensor::zeros({n, c.x_dim}));
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - dec.mean[i];
    acc += d * d;
  }
  return acc / static_cast<double>(n);
}

ModeCoverage mode_coverage(const PointSet& generated, const GmmDensity& gmm,
                           double threshold_sigmas, double min_mass) {
  require_nonempty(generated, "mode_coverage");
  gmm.validate();
  if (generated.dim != gmm.dim()) {
    throw ShapeError("mode_coverage: point dimension does not match the mixture");
  }
  if (!(threshold_sigmas > 0.0)) {
    throw ConfigError("mode_coverage: threshold_sigmas must be > 0");
  }
  const std::size_t K = gmm.n_components();
  std::vector<std::size_t> assigned(K, 0);
  std::size_t good = 0;
  const double t2 = threshold_sigmas * threshold_sigmas;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const auto x = generated.row(i);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < K; ++k) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = x[j] - gmm.means[k][j];
        d2 += diff * diff / gmm.variances[k][j];
      }
      if (d2 < best) {
        best = d2;
        best_k = k;
      }
    }
    if (best <= t2) {
      ++good;
      ++assigned[best_k];
    }
  }
  const double n = static_cast<double>(generated.size());
  ModeCoverage out;
  for (auto count : assigned) {
    if (static_cast<double>(count) >= min_mass * n && count > 0) ++out.modes_covered;
  }
  out.high_quality_fraction = static_cast<double>(good) / n;
  return out;
}

double inception_score_analog(const PointSet& generated, const GmmDensity& gmm) {
  require_nonempty(generated, "inception_score_analog");
  gmm.validate();
  if (generated.dim != gmm.dim()) {
    throw ShapeError("inception_score_analog: point dimension does not match the mixture");
  }
  const std::size_t K = gmm.n_components();
  const std::size_t n = generated.size();
  std::vector<double> r(n * K);
  std::vector<double> rbar(K, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = gmm_responsibilities(gmm, generated.row(i));
    for (std::size_t k = 0; k < K; ++k) {
      r[i * K + k] = ri[k];
      rbar[k] += ri[k];
    }
  }
  for (double& v : rbar) v /= static_cast<double>(n);
  double kl_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      const double p = r[i * K + k];
      if (p > 0.0) kl_sum += p * (std::log(p) - std::log(rbar[k]));
    }
  }
  const double score = std::exp(kl_sum / static_cast<double>(n));
  return std::clamp(score, 1.0, static_cast<double>(K));
}

IwEstimate iw_loglik(const ModelTriple& triple, const PointSet& eval_set,
                     std::size_t k, std::uint64_t seed) {
  require_nonempty(eval_set, "iw_loglik");
  require_encoder(triple, "iw_loglik");
  if (k < 1) throw ConfigError("iw_loglik: k must be >= 1");
  const auto& c = triple.config;
  if (eval_set.dim != c.x_dim) {
    throw ShapeError("iw_loglik: eval set dimension does not match x_dim");
  }
  std::mt19937_64 rng(seed);
  const std::size_t n = eval_set.size();
  const std::size_t dx = c.x_dim, dz = c.z_dim;
  const std::size_t chunk = std::max<std::size_t>(1, 8192 / k);
  IwEstimate out;
  out.per_point.reserve(n);
  std::vector<double> logw(k);
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t m = std::min(chunk, n - start);
    std::vector<double> rep;
    rep.reserve(m * k * dx);
    for (std::size_t i = 0; i < m; ++i) {
      const auto x = eval_set.row(start + i);
      for (std::size_t j = 0; j < k; ++j) rep.insert(rep.end(), x.begin(), x.end());
    }
    const Tensor x_rep = Tensor::matrix(m * k, dx, std::move(rep));
    const auto enc =
        encode_batch(triple, x_rep, standard_normal_matrix(m * k, dz, rng));
    const auto dec =
        decode_batch(triple, enc.sample, Tensor::zeros({m * k, dx}));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t row = i * k + j;
        const double* x = x_rep.data() + row * dx;
        const double* z = enc.sample.data() + row * dz;
        logw[j] = diag_log_pdf(x, dec.mean.data() + row * dx,
                               dec.log_variance.data() + row * dx, dx) +
                  standard_log_pdf(z, dz) -
                  diag_log_pdf(z, enc.mean.data() + row * dz,
                               enc.log_variance.data() + row * dz, dz);
      }
      const double mx = *std::max_element(logw.begin(), logw.end());
      double s = 0.0;
      for (double w : logw) s += std::exp(w - mx);
      out.per_point.push_back(mx + std::log(s / static_cast<double>(k)));
    }
  }
  double sum = 0.0, sq = 0.0;
  for (double v : out.per_point) {
    sum += v;
    sq += v * v;
  }
  const double nn = static_cast<double>(n);
  out.estimate = sum / nn;
  const double var =
      n > 1 ? std::max(0.0, (sq - nn * out.estimate * out.estimate) / (nn - 1.0)) : 0.0;
  out.standard_error = std::sqrt(var / nn);
  return out;
}

PointSet generate_samples(const ModelTriple& triple, std::size_t n,
                          std::mt19937_64& rng) {
  if (n < 1) throw ConfigError("generate_samples: n must be >= 1");
  const auto& c = triple.config;
  const Tensor z = standard_normal_matrix(n, c.z_dim, rng);
  const Tensor eps = standard_normal_matrix(n, c.x_dim, rng);
  return PointSet::from_tensor(decode_batch(triple, z, eps).sample);
}

MetricsRecord evaluate_metrics(const ModelTriple& triple, const PointSet& real,
                               const GmmDensity& gmm, std::size_t n_generated,
                               std::size_t iw_samples, std::mt19937_64& rng) {
  require_nonempty(real, "evaluate_metrics");
  MetricsRecord rec;
  const PointSet generated = generate_samples(triple, n_generated, rng);
  const auto cov = mode_coverage(generated, gmm);
  rec.modes_covered = cov.modes_covered;
  rec.high_quality_fraction = cov.high_quality_fraction;
  rec.is_analog = inception_score_analog(generated, gmm);
  const BatchPair batch = draw_batch(triple, real.to_tensor(), rng);
  rec.skl_estimate = symmetric_kl_estimate(triple, batch).estimate;
  const std::uint64_t iw_seed = rng();
  if (triple.has_encoder()) {
    rec.mse = reconstruction_mse(triple, real);
    if (iw_samples > 0) rec.iw_loglik = iw_loglik(triple, real, iw_samples, iw_seed).estimate;
  }
  return rec;
}

std::vector<ProbeEntry> gradient_norm_probe(const ModelTriple& triple,
                                            const BatchPair& batch,
                                            std::vector<std::size_t> extra_disc_steps,
                                            const ProbeConfig& config) {
  batch.validate(triple);
  std::sort(extra_disc_steps.begin(), extra_disc_steps.end());
  ModelTriple local = triple;
  const auto disc_spec = probe_spec(local, GeneratorTransform::kRawF);
  AdamState adam = AdamState::zeros_like(local.discriminator);
  const AdamHyper hyper{config.discriminator_learning_rate, config.adam_beta1,
                        config.adam_beta2, config.adam_epsilon};
  std::size_t done = 0;
  bool broken = false;
  std::string broken_reason;
  std::vector<ProbeEntry> out;
  for (std::size_t k : extra_disc_steps) {
    ProbeEntry e;
    e.k = k;
    try {
      if (broken) throw DomainError(broken_reason);
      for (; done < k; ++done) {
        auto phase = discriminator_objective(disc_spec, local, batch);
        if (!std::isfinite(phase.value())) {
          throw DomainError("non-finite discriminator objective at extra step " +
                            std::to_string(done + 1));
        }
        phase.backward();
        const auto grads = collect_gradients(*phase.graph, phase.discriminator);
        adam_step(adam, local.discriminator, negated(grads), hyper);
        if (!local.discriminator.all_finite()) {
          throw DomainError("non-finite discriminator parameters at extra step " +
                            std::to_string(done + 1));
        }
      }
      e.raw_f_norm = generator_gradient_norm(local, batch, GeneratorTransform::kRawF);
      e.log_sigmoid_norm =
          generator_gradient_norm(local, batch, GeneratorTransform::kMinimax);
      e.non_saturating_norm =
          generator_gradient_norm(local, batch, GeneratorTransform::kLogSigmoid);
      if (!std::isfinite(e.raw_f_norm) || !std::isfinite(e.log_sigmoid_norm) ||
          !std::isfinite(e.non_saturating_norm)) {
        throw DomainError("non-finite generator gradient norm");
      }
      e.ok = true;
    } catch (const Error& err) {
      e.ok = false;
      e.error = err.what();
      if (!local.discriminator.all_finite() || done < k) {
        broken = true;
        broken_reason = err.what();
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace svae
