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

// Alternating adversarial optimization: discriminator steps on g(psi) (or the
// WGAN critic), then one encoder/decoder step on the generator objective.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "svae/data.hpp"
#include "svae/error.hpp"
#include "svae/linear_gaussian.hpp"
#include "svae/metrics.hpp"
#include "svae/models.hpp"
#include "svae/objectives.hpp"
#include "svae/optim.hpp"

namespace svae {

struct TrainConfig {
  double learning_rate = 1e-4;
  std::size_t batch_size = 512;
  std::size_t total_generator_steps = 20000;
  std::size_t disc_steps_per_gen_step = 1;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double clip_value = 0.01;
  std::uint64_t seed = 0;
  std::size_t eval_every = 1000;
  std::size_t eval_size = 5000;
  // Importance samples per point for iw_loglik in the log; 0 skips it.
  std::size_t iw_samples = 0;

  void validate() const;
  AdamHyper adam() const {
    return {learning_rate, adam_beta1, adam_beta2, adam_epsilon};
  }
};

struct LogRow {
  std::size_t step = 0;
  std::string variant;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double disc_loss = 0.0;
  double gen_loss = 0.0;
  MetricsRecord metrics;
  double gen_grad_norm = 0.0;
  double disc_grad_norm = 0.0;
};

const std::vector<std::string>& log_columns();
// One CSV line per row, columns as in log_columns(); absent metrics are
// written as empty cells.
std::string format_log_row(const LogRow& row);
void write_log_csv(const std::vector<LogRow>& log,
                   const std::filesystem::path& path);

// Raised when a loss, gradient or parameter stops being finite.
class TrainingAborted : public Error {
 public:
  TrainingAborted(std::size_t step, std::string phase, const std::string& what);
  std::size_t step() const { return step_; }
  const std::string& phase() const { return phase_; }

 private:
  std::size_t step_;
  std::string phase_;
};

struct TrainResult {
  ModelTriple triple;
  std::vector<LogRow> log;
  AdamState generator_adam_decoder;
  AdamState generator_adam_encoder;
  AdamState discriminator_adam;
};

// Training uses rows of `data` sampled with replacement. Evaluation draws
// fresh real rows from `gmm` on a separate random stream.
TrainResult train_run(ModelTriple triple, const ObjectiveSpec& objective,
                      const PointSet& data, const GmmDensity& gmm,
                      const TrainConfig& config,
                      const std::function<void(const LogRow&)>& on_eval = {});

// Individual phases, exposed for tests. Each returns the phase objective
// value and gradient norm, and updates only its own parameters.
struct PhaseStep {
  double value = 0.0;
  double grad_norm = 0.0;
};
PhaseStep discriminator_step(ModelTriple& triple, const ObjectiveSpec& objective,
                             const BatchPair& batch, AdamState& adam,
                             const TrainConfig& config);
PhaseStep generator_step(ModelTriple& triple, const ObjectiveSpec& objective,
                         const BatchPair& batch, AdamState& decoder_adam,
                         AdamState& encoder_adam, const TrainConfig& config);

// A standalone discriminator on stacked [x, z] trained with g(psi) to tell
// the joints of a linear-Gaussian pair apart.
struct RatioFitConfig {
  std::vector<std::size_t> hidden = {64, 64};
  Activation activation = Activation::kTanh;
  std::size_t steps = 3000;
  std::size_t batch_size = 256;
  double learning_rate = 2e-3;
  std::uint64_t seed = 0;
};

struct RatioFit {
  MlpSpec spec;
  ParameterSet params;

  // f(x, z) for rows of stacked [x, z].
  Tensor evaluate(const Tensor& xz) const;
};

RatioFit fit_log_ratio(const LinearGaussianSpec& model,
                       const RatioFitConfig& config);

}  // namespace svae
