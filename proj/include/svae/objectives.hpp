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

// The objective family: the discriminator objective g(psi) and the generator
// objectives for sVAE, sVAE-r, ALI, GAN and WGAN.
//
// Sign conventions. The discriminator is trained so that f is large on
// samples of the model joint p(z) p(x|z) and small on samples of the data
// joint q(x) q(z|x); at the optimum f = log p(x, z) - log q(x, z). Both
// phases maximize their objective.

#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "svae/linear_gaussian.hpp"
#include "svae/models.hpp"
#include "svae/tensor.hpp"

namespace svae {

enum class Variant { kSvae, kSvaeR, kAli, kGan, kWgan };

enum class GeneratorTransform {
  // E_q f - E_p f (+ lambda terms).
  kRawF,
  // E_q log sigmoid(f) + E_p log sigmoid(-f).
  kLogSigmoid,
  // Generator side of the sigmoid saddle point:
  // -E_q log sigmoid(-f) - E_p log sigmoid(f).
  kMinimax,
};

const char* variant_name(Variant v);
Variant parse_variant(std::string_view name);
const char* transform_name(GeneratorTransform t);
GeneratorTransform parse_transform(std::string_view name);

struct ObjectiveSpec {
  Variant variant = Variant::kSvae;
  double lambda = 0.0;
  GeneratorTransform generator_transform = GeneratorTransform::kRawF;
  bool decoder_only = false;

  // Spec with the variant's default transform and decoder_only flag.
  static ObjectiveSpec make(Variant variant, double lambda = 0.0);
  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

// Samples from both joints. The q side holds data rows x, encoder draws z
// and the encoder noise that produced them; the p side holds prior draws z,
// decoder draws x and the decoder noise. Keeping the noise lets the
// generator phase rebuild the same draws with gradients attached.
struct BatchPair {
  Tensor q_x, q_z, q_eps;
  Tensor p_z, p_x, p_eps;

  std::size_t q_size() const { return q_x.rank() == 2 ? q_x.rows() : 0; }
  std::size_t p_size() const { return p_z.rank() == 2 ? p_z.rows() : 0; }
  void validate(const ModelTriple& triple) const;
};

// Draws encoder/decoder noise and prior codes for a batch of data rows and
// runs both networks forward. Decoder-only models leave q_z/q_eps empty.
BatchPair draw_batch(const ModelTriple& triple, Tensor data_rows,
                     std::mt19937_64& rng);

Tensor standard_normal_matrix(std::size_t rows, std::size_t cols,
                              std::mt19937_64& rng);

// Objective expressions over discriminator outputs f_q ([n_q]) and f_p
// ([n_p]).
Var discriminator_value(const ObjectiveSpec& spec, Var f_q, Var f_p);
// Generator expression without the lambda terms.
Var generator_value(const ObjectiveSpec& spec, Var f_q, Var f_p);

// A scalar objective built on its own graph with the phase's parameters
// bound as variables and the others as constants.
struct PhaseObjective {
  std::unique_ptr<Graph> graph;
  Var objective;
  BoundParameters encoder;
  BoundParameters decoder;
  BoundParameters discriminator;

  double value() const { return objective.value().item(); }
  // Fills the gradients (ascent direction) of the trainable parameters.
  void backward() { graph->backward(objective); }
};

// g(psi), or the WGAN critic difference E_p f - E_q f. Only the
// discriminator parameters are trainable; the batch is held fixed.
PhaseObjective discriminator_objective(const ObjectiveSpec& spec,
                                       const ModelTriple& triple,
                                       const BatchPair& batch);

// Generator objective. Encoder and decoder parameters are trainable (the
// decoder alone for decoder-only variants) and the discriminator is fixed.
// For decoder-only variants the q-side term carries no gradient.
PhaseObjective generator_objective(const ObjectiveSpec& spec,
                                   const ModelTriple& triple,
                                   const BatchPair& batch);

struct KlEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// E_p f - E_q f with its standard error, from discriminator outputs.
KlEstimate symmetric_kl_estimate(std::span<const double> f_p,
                                 std::span<const double> f_q);
// The same estimate with the triple's discriminator on the batch.
KlEstimate symmetric_kl_estimate(const ModelTriple& triple,
                                 const BatchPair& batch);

// log p(x, z) - log q(x, z) for a linear-Gaussian pair, from the factored
// densities p(z) p(x|z) and q(x) q(z|x).
double analytic_log_ratio(const LinearGaussianSpec& model,
                          std::span<const double> x, std::span<const double> z);

}  // namespace svae
