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

#include "svae/training.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>

#include "svae/error.hpp"

namespace svae {
namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

Tensor sample_rows(const PointSet& data, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return data.gather(idx);
}

void require_finite(const PhaseStep& s, const char* what) {
  if (!std::isfinite(s.value)) {
    throw DomainError(std::string(what) + " objective is not finite");
  }
  if (!std::isfinite(s.grad_norm)) {
    throw DomainError(std::string(what) + " gradient is not finite");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("train.learning_rate must be > 0");
  }
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (disc_steps_per_gen_step < 1) {
    throw ConfigError("train.disc_steps_per_gen_step must be >= 1");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("train.adam_beta1 and adam_beta2 must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ConfigError("train.adam_epsilon must be > 0");
  if (!(clip_value > 0.0)) throw ConfigError("train.clip_value must be > 0");
  if (eval_every < 1) throw ConfigError("train.eval_every must be >= 1");
  if (eval_size < 1) throw ConfigError("train.eval_size must be >= 1");
}

const std::vector<std::string>& log_columns() {
  static const std::vector<std::string> cols = {
      "step",         "variant",        "lambda",        "seed",
      "disc_loss",    "gen_loss",       "mse",           "mode_coverage",
      "is_analog",    "skl_estimate",   "gen_grad_norm", "disc_grad_norm",
      "high_quality_fraction", "iw_loglik"};
  return cols;
}

std::string format_log_row(const LogRow& r) {
  std::string s;
  s += std::to_string(r.step) + ',' + r.variant + ',' + num(r.lambda) + ',' +
       std::to_string(r.seed) + ',' + num(r.disc_loss) + ',' + num(r.gen_loss) +
       ',' + opt(r.metrics.mse) + ',' + std::to_string(r.metrics.modes_covered) +
       ',' + num(r.metrics.is_analog) + ',' + num(r.metrics.skl_estimate) + ',' +
       num(r.gen_grad_norm) + ',' + num(r.disc_grad_norm) + ',' +
       num(r.metrics.high_quality_fraction) + ',' + opt(r.metrics.iw_loglik);
  return s;
}

void write_log_csv(const std::vector<LogRow>& log,
                   const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw ConfigError("cannot write " + tmp.string());
    const auto& cols = log_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& row : log) os << format_log_row(row) << '\n';
    if (!os) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TrainingAborted::TrainingAborted(std::size_t step, std::string phase,
                                 const std::string& what)
    : Error("training aborted at step " + std::to_string(step) + " (" + phase +
            " phase): " + what),
      step_(step),
      phase_(std::move(phase)) {}

PhaseStep discriminator_step(ModelTriple& triple, const ObjectiveSpec& objective,
                             const BatchPair& batch, AdamState& adam,
                             const TrainConfig& config) {
  auto phase = discriminator_objective(objective, triple, batch);
  phase.backward();
  const auto grads = collect_gradients(*phase.graph, phase.discriminator);
  PhaseStep out{phase.value(), gradient_norm(grads)};
  require_finite(out, "discriminator");
  adam_step(adam, triple.discriminator, negated(grads), config.adam());
  if (objective.variant == Variant::kWgan) {
    clip_parameters(triple.discriminator, config.clip_value);
  }
  if (!triple.discriminator.all_finite()) {
    throw DomainError("discriminator parameters are not finite");
  }
  return out;
}

PhaseStep generator_step(ModelTriple& triple, const ObjectiveSpec& objective,
                         const BatchPair& batch, AdamState& decoder_adam,
                         AdamState& encoder_adam, const TrainConfig& config) {
  auto phase = generator_objective(objective, triple, batch);
  phase.backward();
  const auto dec = collect_gradients(*phase.graph, phase.decoder);
  std::vector<Tensor> enc;
  if (triple.has_encoder()) enc = collect_gradients(*phase.graph, phase.encoder);
  const double n2 = std::pow(gradient_norm(dec), 2) + std::pow(gradient_norm(enc), 2);
  PhaseStep out{phase.value(), std::sqrt(n2)};
  require_finite(out, "generator");
  adam_step(decoder_adam, triple.decoder, negated(dec), config.adam());
  if (triple.has_encoder()) {
    adam_step(encoder_adam, triple.encoder, negated(enc), config.adam());
  }
  if (!triple.decoder.all_finite() || !triple.encoder.all_finite()) {
    throw DomainError("generator parameters are not finite");
  }
  return out;
}

TrainResult train_run(ModelTriple triple, const ObjectiveSpec& objective,
                      const PointSet& data, const GmmDensity& gmm,
                      const TrainConfig& config,
                      const std::function<void(const LogRow&)>& on_eval) {
  config.validate();
  objective.validate();
  triple.config.validate();
  if (objective.decoder_only != triple.config.decoder_only) {
    throw ConfigError("train_run: objective and model disagree on decoder_only");
  }
  if (data.empty() || data.dim != triple.config.x_dim) {
    throw ShapeError("train_run: data must be nonempty rows of width x_dim");
  }
  gmm.validate();
  if (gmm.dim() != triple.config.x_dim) {
    throw ShapeError("train_run: mixture dimension does not match x_dim");
  }

  TrainResult res;
  res.triple = std::move(triple);
  ModelTriple& model = res.triple;
  res.discriminator_adam = AdamState::zeros_like(model.discriminator);
  res.generator_adam_decoder = AdamState::zeros_like(model.decoder);
  res.generator_adam_encoder = AdamState::zeros_like(model.encoder);

  std::seed_seq train_seq{config.seed, std::uint64_t{1}};
  std::seed_seq eval_seq{config.seed, std::uint64_t{2}};
  std::mt19937_64 train_rng(train_seq);
  std::mt19937_64 eval_rng(eval_seq);

  const std::size_t total = config.total_generator_steps;
  for (std::size_t step = 1; step <= total; ++step) {
    PhaseStep disc, gen;
    const char* phase = "discriminator";
    try {
      for (std::size_t j = 0; j < config.disc_steps_per_gen_step; ++j) {
        const auto batch =
            draw_batch(model, sample_rows(data, config.batch_size, train_rng), train_rng);
        disc = discriminator_step(model, objective, batch, res.discriminator_adam, config);
      }
      phase = "generator";
      const auto batch =
          draw_batch(model, sample_rows(data, config.batch_size, train_rng), train_rng);
      gen = generator_step(model, objective, batch, res.generator_adam_decoder,
                           res.generator_adam_encoder, config);
    } catch (const DomainError& e) {
      throw TrainingAborted(step, phase, e.what());
    }

    if (step % config.eval_every != 0 && step != total) continue;
    LogRow row;
    row.step = step;
    row.variant = variant_name(objective.variant);
    row.lambda = objective.lambda;
    row.seed = config.seed;
    row.disc_loss = disc.value;
    row.gen_loss = gen.value;
    row.gen_grad_norm = gen.grad_norm;
    row.disc_grad_norm = disc.grad_norm;
    try {
      const PointSet real = sample_dataset(gmm, config.eval_size, eval_rng());
      row.metrics = evaluate_metrics(model, real, gmm, config.eval_size,
                                     config.iw_samples, eval_rng);
      row.metrics.step = step;
      row.metrics.check(gmm.n_components());
    } catch (const DomainError& e) {
      throw TrainingAborted(step, "evaluation", e.what());
    }
    if (on_eval) on_eval(row);
    res.log.push_back(std::move(row));
  }
  return res;
}

Tensor RatioFit::evaluate(const Tensor& xz) const {
  Graph g;
  const auto bound = bind(g, params, false);
  return row_sum(mlp_forward(spec, bound, g.constant(xz))).value();
}

RatioFit fit_log_ratio(const LinearGaussianSpec& model,
                       const RatioFitConfig& config) {
  model.validate();
  if (config.steps < 1 || config.batch_size < 1) {
    throw ConfigError("fit_log_ratio: steps and batch_size must be >= 1");
  }
  const std::size_t dx = model.dx(), dz = model.dz();
  RatioFit fit;
  fit.spec = ModelConfig::critic_spec(dx + dz, config.hidden, config.activation);
  fit.spec.validate();
  std::seed_seq seq{config.seed, std::uint64_t{3}};
  std::mt19937_64 rng(seq);
  fit.params = init_xavier(fit.spec, rng());
  AdamState adam = AdamState::zeros_like(fit.params);
  const AdamHyper hyper{config.learning_rate, 0.5, 0.999, 1e-8};

  auto stack = [&](bool from_p) {
    std::vector<double> v;
    v.reserve(config.batch_size * (dx + dz));
    for (std::size_t i = 0; i < config.batch_size; ++i) {
      const auto s = from_p ? sample_joint_p(model, rng) : sample_joint_q(model, rng);
      v.insert(v.end(), s.x.data(), s.x.data() + dx);
      v.insert(v.end(), s.z.data(), s.z.data() + dz);
    }
    return Tensor::matrix(config.batch_size, dx + dz, std::move(v));
  };

  for (std::size_t step = 0; step < config.steps; ++step) {
    Graph g;
    const auto bound = bind(g, fit.params, true);
    const Var f_p = row_sum(mlp_forward(fit.spec, bound, g.constant(stack(true))));
    const Var f_q = row_sum(mlp_forward(fit.spec, bound, g.constant(stack(false))));
    const Var objective = mean(log_sigmoid(-f_q)) + mean(log_sigmoid(f_p));
    if (!std::isfinite(objective.value().item())) {
      throw DomainError("fit_log_ratio: objective is not finite at step " +
                        std::to_string(step + 1));
    }
    g.backward(objective);
    adam_step(adam, fit.params, negated(collect_gradients(g, bound)), hyper);
  }
  return fit;
}

}  // namespace svae
