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

#include "svae/objectives.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "svae/distributions.hpp"
#include "svae/error.hpp"

namespace svae {
namespace {

std::string normalize(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

double sample_variance(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

double average(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kSvae: return "SVAE";
    case Variant::kSvaeR: return "SVAE_R";
    case Variant::kAli: return "ALI";
    case Variant::kGan: return "GAN";
    case Variant::kWgan: return "WGAN";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  const auto n = normalize(name);
  if (n == "svae") return Variant::kSvae;
  if (n == "svaer") return Variant::kSvaeR;
  if (n == "ali") return Variant::kAli;
  if (n == "gan") return Variant::kGan;
  if (n == "wgan") return Variant::kWgan;
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

const char* transform_name(GeneratorTransform t) {
  switch (t) {
    case GeneratorTransform::kRawF: return "raw-f";
    case GeneratorTransform::kLogSigmoid: return "log-sigmoid";
    case GeneratorTransform::kMinimax: return "minimax";
  }
  return "unknown";
}

GeneratorTransform parse_transform(std::string_view name) {
  const auto n = normalize(name);
  if (n == "rawf" || n == "raw") return GeneratorTransform::kRawF;
  if (n == "logsigmoid") return GeneratorTransform::kLogSigmoid;
  if (n == "minimax") return GeneratorTransform::kMinimax;
  throw ConfigError("unknown generator transform '" + std::string(name) + "'");
}

ObjectiveSpec ObjectiveSpec::make(Variant variant, double lambda) {
  ObjectiveSpec spec;
  spec.variant = variant;
  spec.lambda = lambda;
  switch (variant) {
    case Variant::kSvae:
    case Variant::kSvaeR:
    case Variant::kWgan:
      spec.generator_transform = GeneratorTransform::kRawF;
      break;
    case Variant::kAli:
      spec.generator_transform = GeneratorTransform::kLogSigmoid;
      break;
    case Variant::kGan:
      spec.generator_transform = GeneratorTransform::kMinimax;
      break;
  }
  spec.decoder_only = variant == Variant::kGan || variant == Variant::kWgan;
  return spec;
}

void ObjectiveSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("objective: lambda must be a finite value >= 0");
  }
  if (lambda > 0.0 && variant != Variant::kSvaeR) {
    throw ConfigError(std::string("objective: lambda > 0 requires SVAE_R, got ") +
                      variant_name(variant));
  }
  const bool needs_decoder_only =
      variant == Variant::kGan || variant == Variant::kWgan;
  if (decoder_only != needs_decoder_only) {
    throw ConfigError(
        "objective: decoder_only must be true exactly for GAN and WGAN");
  }
  if (variant == Variant::kWgan &&
      generator_transform != GeneratorTransform::kRawF) {
    throw ConfigError("objective: the WGAN critic uses the raw-f transform");
  }
}

void BatchPair::validate(const ModelTriple& triple) const {
  const auto& c = triple.config;
  if (q_size() == 0 || p_size() == 0) {
    throw ShapeError("batch: both halves must be nonempty");
  }
  if (q_x.cols() != c.x_dim || p_x.cols() != c.x_dim ||
      p_z.cols() != c.z_dim || p_x.rows() != p_size()) {
    throw ShapeError("batch: p or q rows do not match the model dimensions");
  }
  if (!c.decoder_only &&
      (q_z.rank() != 2 || q_z.rows() != q_size() || q_z.cols() != c.z_dim)) {
    throw ShapeError("batch: encoder draws do not match the data rows");
  }
}

Tensor standard_normal_matrix(std::size_t rows, std::size_t cols,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = normal(rng);
  return Tensor::matrix(rows, cols, std::move(v));
}

BatchPair draw_batch(const ModelTriple& triple, Tensor data_rows,
                     std::mt19937_64& rng) {
  const auto& c = triple.config;
  if (data_rows.rank() != 2 || data_rows.cols() != c.x_dim ||
      data_rows.rows() == 0) {
    throw ShapeError("draw_batch: data rows " +
                     shape_string(data_rows.shape()) + " do not match x_dim " +
                     std::to_string(c.x_dim));
  }
  const std::size_t n = data_rows.rows();
  BatchPair b;
  b.q_x = std::move(data_rows);
  if (!c.decoder_only) {
    b.q_eps = standard_normal_matrix(n, c.z_dim, rng);
    b.q_z = encode_batch(triple, b.q_x, b.q_eps).sample;
  }
  b.p_z = standard_normal_matrix(n, c.z_dim, rng);
  b.p_eps = standard_normal_matrix(n, c.x_dim, rng);
  b.p_x = decode_batch(triple, b.p_z, b.p_eps).sample;
  return b;
}

Var discriminator_value(const ObjectiveSpec& spec, Var f_q, Var f_p) {
  if (spec.variant == Variant::kWgan) return mean(f_p) - mean(f_q);
  // log(1 - sigmoid(f)) = log sigmoid(-f).
  return mean(log_sigmoid(-f_q)) + mean(log_sigmoid(f_p));
}

Var generator_value(const ObjectiveSpec& spec, Var f_q, Var f_p) {
  switch (spec.generator_transform) {
    case GeneratorTransform::kRawF:
      return mean(f_q) - mean(f_p);
    case GeneratorTransform::kLogSigmoid:
      return mean(log_sigmoid(f_q)) + mean(log_sigmoid(-f_p));
    case GeneratorTransform::kMinimax:
      return -(mean(log_sigmoid(-f_q)) + mean(log_sigmoid(f_p)));
  }
  throw Error("unhandled generator transform");
}

PhaseObjective discriminator_objective(const ObjectiveSpec& spec,
                                       const ModelTriple& triple,
                                       const BatchPair& batch) {
  spec.validate();
  batch.validate(triple);
  PhaseObjective out;
  out.graph = std::make_unique<Graph>();
  Graph& g = *out.graph;
  out.discriminator = bind(g, triple.discriminator, true);
  const bool joint = !triple.config.decoder_only;
  const Var f_q = discriminator_logits(triple, out.discriminator,
                                       g.constant(batch.q_x),
                                       joint ? g.constant(batch.q_z) : Var());
  const Var f_p = discriminator_logits(triple, out.discriminator,
                                       g.constant(batch.p_x),
                                       joint ? g.constant(batch.p_z) : Var());
  out.objective = discriminator_value(spec, f_q, f_p);
  return out;
}

PhaseObjective generator_objective(const ObjectiveSpec& spec,
                                   const ModelTriple& triple,
                                   const BatchPair& batch) {
  spec.validate();
  batch.validate(triple);
  if (spec.decoder_only != triple.config.decoder_only) {
    throw ConfigError("generator_objective: objective and model disagree on "
                      "decoder_only");
  }
  if (spec.lambda > 0.0 && !triple.has_encoder()) {
    throw ConfigError(
        "generator_objective: lambda terms need explicit encoder and decoder "
        "densities");
  }
  PhaseObjective out;
  out.graph = std::make_unique<Graph>();
  Graph& g = *out.graph;
  out.discriminator = bind(g, triple.discriminator, false);
  out.decoder = bind(g, triple.decoder, true);

  // p side: z ~ p(z), x = decoder draw.
  const Var p_z = g.constant(batch.p_z);
  const auto dec = decoder_heads(triple, out.decoder, p_z);
  const Var p_x =
      reparameterize(dec.mean, dec.log_variance, g.constant(batch.p_eps));

  Var f_q, f_p;
  Var q_x = g.constant(batch.q_x);
  Var q_z;
  if (triple.config.decoder_only) {
    f_q = discriminator_logits(triple, out.discriminator, q_x, Var());
    f_p = discriminator_logits(triple, out.discriminator, p_x, Var());
  } else {
    out.encoder = bind(g, triple.encoder, true);
    const auto enc = encoder_heads(triple, out.encoder, q_x);
    q_z = reparameterize(enc.mean, enc.log_variance, g.constant(batch.q_eps));
    f_q = discriminator_logits(triple, out.discriminator, q_x, q_z);
    f_p = discriminator_logits(triple, out.discriminator, p_x, p_z);
  }
  Var objective = generator_value(spec, f_q, f_p);

  if (spec.lambda > 0.0) {
    // lambda * (E_q log p(x|z) + E_p log q(z|x)).
    const auto recon = decoder_heads(triple, out.decoder, q_z);
    const Var lp_x =
        mean(gaussian_log_pdf_rows(q_x, recon.mean, recon.log_variance));
    const auto infer = encoder_heads(triple, out.encoder, p_x);
    const Var lp_z =
        mean(gaussian_log_pdf_rows(p_z, infer.mean, infer.log_variance));
    objective = objective + scale(lp_x + lp_z, spec.lambda);
  }
  out.objective = objective;
  return out;
}

KlEstimate symmetric_kl_estimate(std::span<const double> f_p,
                                 std::span<const double> f_q) {
  if (f_p.empty() || f_q.empty()) {
    throw ShapeError("symmetric_kl_estimate: empty batch");
  }
  const double mp = average(f_p), mq = average(f_q);
  const double se =
      std::sqrt(sample_variance(f_p, mp) / static_cast<double>(f_p.size()) +
                sample_variance(f_q, mq) / static_cast<double>(f_q.size()));
  return {mp - mq, se};
}

KlEstimate symmetric_kl_estimate(const ModelTriple& triple,
                                 const BatchPair& batch) {
  batch.validate(triple);
  const Tensor f_p = discriminate_batch(triple, batch.p_x, batch.p_z);
  const Tensor f_q = discriminate_batch(triple, batch.q_x, batch.q_z);
  return symmetric_kl_estimate(f_p.values(), f_q.values());
}

double analytic_log_ratio(const LinearGaussianSpec& model,
                          std::span<const double> x,
                          std::span<const double> z) {
  model.validate();
  if (x.size() != model.dx() || z.size() != model.dz()) {
    throw ShapeError("analytic_log_ratio: (x, z) dimensions do not conform");
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), z.size());
  auto iso = [](const Eigen::VectorXd& mean, double scale) {
    return DiagonalGaussian(
        std::vector<double>(mean.data(), mean.data() + mean.size()),
        std::vector<double>(mean.size(), 2.0 * std::log(scale)));
  };
  const Eigen::VectorXd x_mean = model.A * zv + model.b;
  const Eigen::VectorXd z_mean = model.C * xv + model.d;
  std::vector<double> s_log(model.dx());
  for (std::size_t i = 0; i < model.dx(); ++i) {
    s_log[i] = std::log(model.S(static_cast<Eigen::Index>(i)));
  }
  const DiagonalGaussian data(
      std::vector<double>(model.m.data(), model.m.data() + model.m.size()),
      std::move(s_log));
  const double log_p = gaussian_log_pdf(DiagonalGaussian::standard(model.dz()), z) +
                       gaussian_log_pdf(iso(x_mean, model.sigma), x);
  const double log_q =
      gaussian_log_pdf(data, x) + gaussian_log_pdf(iso(z_mean, model.tau), z);
  return log_p - log_q;
}

}  // namespace svae
