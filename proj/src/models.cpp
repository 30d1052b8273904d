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

#include "svae/models.hpp"

#include <cmath>
#include <random>

#include "svae/error.hpp"

namespace svae {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kLeakyRelu: return "leaky-relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "leaky-relu") return Activation::kLeakyRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void MlpSpec::validate() const {
  if (layer_widths.size() < 2) {
    throw ConfigError("mlp: needs an input and an output width");
  }
  for (auto w : layer_widths) {
    if (w == 0) throw ConfigError("mlp: layer widths must be positive");
  }
  std::size_t total = 0;
  for (const auto& h : output_heads) total += h.width;
  if (!output_heads.empty() && total != output_dim()) {
    throw ConfigError("mlp: head widths sum to " + std::to_string(total) +
                      ", output width is " + std::to_string(output_dim()));
  }
}

std::pair<std::size_t, std::size_t> MlpSpec::head_range(
    std::string_view name) const {
  std::size_t begin = 0;
  for (const auto& h : output_heads) {
    if (h.name == name) return {begin, begin + h.width};
    begin += h.width;
  }
  throw ConfigError("mlp: no output head named '" + std::string(name) + "'");
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

bool ParameterSet::all_finite() const {
  for (const auto& t : tensors) {
    if (!t.all_finite()) return false;
  }
  return true;
}

bool operator==(const ParameterSet& a, const ParameterSet& b) {
  return a.names == b.names && a.tensors == b.tensors;
}

ParameterSet init_xavier(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  ParameterSet params;
  for (std::size_t l = 0; l < spec.n_layers(); ++l) {
    const std::size_t fan_in = spec.layer_widths[l];
    const std::size_t fan_out = spec.layer_widths[l + 1];
    const double bound =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    std::vector<double> w(fan_in * fan_out);
    for (double& v : w) v = uniform(rng);
    params.names.push_back("layer" + std::to_string(l) + ".weight");
    params.tensors.push_back(Tensor::matrix(fan_in, fan_out, std::move(w)));
    params.names.push_back("layer" + std::to_string(l) + ".bias");
    params.tensors.push_back(Tensor::zeros({fan_out}));
  }
  return params;
}

BoundParameters bind(Graph& graph, const ParameterSet& params,
                     bool trainable) {
  BoundParameters bound;
  bound.trainable = trainable;
  bound.vars.reserve(params.size());
  for (const auto& t : params.tensors) {
    bound.vars.push_back(trainable ? graph.variable(t) : graph.constant(t));
  }
  return bound;
}

std::vector<Tensor> collect_gradients(const Graph& graph,
                                      const BoundParameters& bound) {
  if (!bound.trainable) throw Error("collect_gradients: parameters are constant");
  std::vector<Tensor> grads;
  grads.reserve(bound.vars.size());
  for (const auto& v : bound.vars) grads.push_back(graph.grad(v));
  return grads;
}

Var mlp_forward(const MlpSpec& spec, const BoundParameters& params,
                Var input) {
  if (params.vars.size() != 2 * spec.n_layers()) {
    throw ShapeError("mlp_forward: parameter count does not match spec");
  }
  if (input.value().cols() != spec.input_dim() || input.value().rank() != 2) {
    throw ShapeError("mlp_forward: input " + shape_string(input.shape()) +
                     " does not match input width " +
                     std::to_string(spec.input_dim()));
  }
  Var h = input;
  for (std::size_t l = 0; l < spec.n_layers(); ++l) {
    h = broadcast_add(matmul(h, params.vars[2 * l]), params.vars[2 * l + 1]);
    if (l + 1 == spec.n_layers()) break;
    switch (spec.activation) {
      case Activation::kRelu: h = relu(h); break;
      case Activation::kLeakyRelu: h = leaky_relu(h, spec.leaky_slope); break;
      case Activation::kTanh: h = tanh(h); break;
      case Activation::kIdentity: break;
    }
  }
  return h;
}

double LogVarianceClamp::apply(double raw) const {
  return center() + half_range() * std::tanh((raw - center()) / half_range());
}

double LogVarianceClamp::inverse(double log_variance) const {
  const double u = (log_variance - center()) / half_range();
  if (!(std::abs(u) < 1.0)) {
    throw DomainError("LogVarianceClamp: value outside the clamp range");
  }
  return center() + half_range() * std::atanh(u);
}

Var LogVarianceClamp::apply(Var raw) const {
  return add_scalar(
      scale(tanh(scale(add_scalar(raw, -center()), 1.0 / half_range())),
            half_range()),
      center());
}

MlpSpec ModelConfig::gaussian_head_spec(std::size_t in, std::size_t out,
                                        std::vector<std::size_t> hidden,
                                        Activation activation) {
  MlpSpec spec;
  spec.layer_widths.push_back(in);
  spec.layer_widths.insert(spec.layer_widths.end(), hidden.begin(),
                           hidden.end());
  spec.layer_widths.push_back(2 * out);
  spec.activation = activation;
  spec.output_heads = {{"mean", out}, {"log_variance", out}};
  return spec;
}

MlpSpec ModelConfig::critic_spec(std::size_t in,
                                 std::vector<std::size_t> hidden,
                                 Activation activation) {
  MlpSpec spec;
  spec.layer_widths.push_back(in);
  spec.layer_widths.insert(spec.layer_widths.end(), hidden.begin(),
                           hidden.end());
  spec.layer_widths.push_back(1);
  spec.activation = activation;
  spec.output_heads = {{"logit", 1}};
  return spec;
}

ModelConfig ModelConfig::toy_default(std::size_t x_dim, std::size_t z_dim,
                                     bool decoder_only) {
  ModelConfig c;
  c.x_dim = x_dim;
  c.z_dim = z_dim;
  c.decoder_only = decoder_only;
  c.encoder = gaussian_head_spec(x_dim, z_dim, {64, 64}, Activation::kLeakyRelu);
  c.decoder = gaussian_head_spec(z_dim, x_dim, {64, 64}, Activation::kLeakyRelu);
  c.discriminator = critic_spec(decoder_only ? x_dim : x_dim + z_dim,
                                {128, 128, 128}, Activation::kRelu);
  return c;
}

void ModelConfig::validate() const {
  decoder.validate();
  discriminator.validate();
  if (decoder.input_dim() != z_dim || decoder.output_dim() != 2 * x_dim) {
    throw ConfigError("model: decoder must map z_dim to 2 * x_dim");
  }
  if (!decoder_only) {
    encoder.validate();
    if (encoder.input_dim() != x_dim || encoder.output_dim() != 2 * z_dim) {
      throw ConfigError("model: encoder must map x_dim to 2 * z_dim");
    }
  }
  const std::size_t disc_in = decoder_only ? x_dim : x_dim + z_dim;
  if (discriminator.input_dim() != disc_in || discriminator.output_dim() != 1) {
    throw ConfigError("model: discriminator must map " +
                      std::to_string(disc_in) + " inputs to a scalar");
  }
  if (!(clamp.min < clamp.max)) {
    throw ConfigError("model: log-variance clamp needs min < max");
  }
}

ModelTriple ModelTriple::initialize(const ModelConfig& config,
                                    std::uint64_t seed) {
  config.validate();
  std::seed_seq seq{seed};
  std::vector<std::uint64_t> seeds(3);
  seq.generate(seeds.begin(), seeds.end());
  ModelTriple t;
  t.config = config;
  if (!config.decoder_only) t.encoder = init_xavier(config.encoder, seeds[0]);
  t.decoder = init_xavier(config.decoder, seeds[1]);
  t.discriminator = init_xavier(config.discriminator, seeds[2]);
  return t;
}

namespace {

GaussianHeads split_heads(const MlpSpec& spec, const LogVarianceClamp& clamp,
                          Var out) {
  const auto [m0, m1] = spec.head_range("mean");
  const auto [v0, v1] = spec.head_range("log_variance");
  return {slice_columns(out, m0, m1), clamp.apply(slice_columns(out, v0, v1))};
}

Tensor row_tensor(std::span<const double> v) {
  return Tensor::matrix(1, v.size(), std::vector<double>(v.begin(), v.end()));
}

std::vector<double> to_vector(const Tensor& t) {
  return std::vector<double>(t.values().begin(), t.values().end());
}

}  // namespace

GaussianHeads encoder_heads(const ModelTriple& triple,
                            const BoundParameters& encoder, Var x) {
  if (!triple.has_encoder()) throw ConfigError("model has no encoder");
  return split_heads(triple.config.encoder, triple.config.clamp,
                     mlp_forward(triple.config.encoder, encoder, x));
}

GaussianHeads decoder_heads(const ModelTriple& triple,
                            const BoundParameters& decoder, Var z) {
  return split_heads(triple.config.decoder, triple.config.clamp,
                     mlp_forward(triple.config.decoder, decoder, z));
}

Var discriminator_logits(const ModelTriple& triple,
                         const BoundParameters& discriminator, Var x, Var z) {
  if (x.value().cols() != triple.config.x_dim) {
    throw ShapeError("discriminate: x has width " +
                     std::to_string(x.value().cols()) + ", expected " +
                     std::to_string(triple.config.x_dim));
  }
  Var input = x;
  if (!triple.config.decoder_only) {
    if (z.value().cols() != triple.config.z_dim) {
      throw ShapeError("discriminate: z has width " +
                       std::to_string(z.value().cols()) + ", expected " +
                       std::to_string(triple.config.z_dim));
    }
    input = concat({x, z});
  }
  return row_sum(mlp_forward(triple.config.discriminator, discriminator, input));
}

BatchDraw encode_batch(const ModelTriple& triple, const Tensor& x,
                       const Tensor& eps) {
  if (eps.shape() != Shape{x.rows(), triple.config.z_dim}) {
    throw ShapeError("encode: eps shape " + shape_string(eps.shape()));
  }
  Graph g;
  const auto params = bind(g, triple.encoder, false);
  const auto heads = encoder_heads(triple, params, g.constant(x));
  const Var z = reparameterize(heads.mean, heads.log_variance, g.constant(eps));
  return {z.value(), heads.mean.value(), heads.log_variance.value()};
}

BatchDraw decode_batch(const ModelTriple& triple, const Tensor& z,
                       const Tensor& eps) {
  if (eps.shape() != Shape{z.rows(), triple.config.x_dim}) {
    throw ShapeError("decode: eps shape " + shape_string(eps.shape()));
  }
  Graph g;
  const auto params = bind(g, triple.decoder, false);
  const auto heads = decoder_heads(triple, params, g.constant(z));
  const Var x = reparameterize(heads.mean, heads.log_variance, g.constant(eps));
  return {x.value(), heads.mean.value(), heads.log_variance.value()};
}

Tensor discriminate_batch(const ModelTriple& triple, const Tensor& x,
                          const Tensor& z) {
  Graph g;
  const auto params = bind(g, triple.discriminator, false);
  const Var zv = triple.config.decoder_only ? Var() : g.constant(z);
  return discriminator_logits(triple, params, g.constant(x), zv).value();
}

Draw encode(const ModelTriple& triple, std::span<const double> x,
            std::span<const double> eps) {
  const auto b = encode_batch(triple, row_tensor(x), row_tensor(eps));
  return {to_vector(b.sample),
          DiagonalGaussian(to_vector(b.mean), to_vector(b.log_variance))};
}

Draw decode(const ModelTriple& triple, std::span<const double> z,
            std::span<const double> eps) {
  const auto b = decode_batch(triple, row_tensor(z), row_tensor(eps));
  return {to_vector(b.sample),
          DiagonalGaussian(to_vector(b.mean), to_vector(b.log_variance))};
}

double discriminate(const ModelTriple& triple, std::span<const double> x,
                    std::span<const double> z) {
  const Tensor zt = triple.config.decoder_only ? Tensor() : row_tensor(z);
  return discriminate_batch(triple, row_tensor(x), zt).item();
}

}  // namespace svae
