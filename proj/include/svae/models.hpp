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

// Encoder q(z|x), decoder p(x|z) and discriminator f(x, z) as MLPs with
// Gaussian output heads.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svae/distributions.hpp"
#include "svae/tensor.hpp"

namespace svae {

enum class Activation { kRelu, kLeakyRelu, kTanh, kIdentity };

const char* activation_name(Activation a);
Activation parse_activation(std::string_view name);

struct OutputHead {
  std::string name;
  std::size_t width = 0;
};

struct MlpSpec {
  // Input width, hidden widths, output width.
  std::vector<std::size_t> layer_widths;
  Activation activation = Activation::kLeakyRelu;
  double leaky_slope = 0.2;
  std::vector<OutputHead> output_heads;

  void validate() const;
  std::size_t input_dim() const { return layer_widths.front(); }
  std::size_t output_dim() const { return layer_widths.back(); }
  std::size_t n_layers() const { return layer_widths.size() - 1; }
  // Column range of a named head within the output.
  std::pair<std::size_t, std::size_t> head_range(std::string_view name) const;
};

// Named weight/bias tensors of one network. Weights are [fan_in, fan_out],
// biases [fan_out].
struct ParameterSet {
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  std::size_t size() const { return tensors.size(); }
  bool empty() const { return tensors.empty(); }
  std::size_t scalar_count() const;
  bool all_finite() const;
};

bool operator==(const ParameterSet& a, const ParameterSet& b);

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
ParameterSet init_xavier(const MlpSpec& spec, std::uint64_t seed);

// A parameter set registered in a graph, as variables or as constants.
struct BoundParameters {
  std::vector<Var> vars;
  bool trainable = false;
};

BoundParameters bind(Graph& graph, const ParameterSet& params, bool trainable);
// Gradients of the last backward() for each bound parameter.
std::vector<Tensor> collect_gradients(const Graph& graph,
                                      const BoundParameters& bound);

Var mlp_forward(const MlpSpec& spec, const BoundParameters& params, Var input);

// Smooth map of an unbounded head onto (min, max):
//   center + half * tanh((raw - center) / half).
struct LogVarianceClamp {
  double min = -8.0;
  double max = 4.0;

  double center() const { return 0.5 * (min + max); }
  double half_range() const { return 0.5 * (max - min); }
  double apply(double raw) const;
  double inverse(double log_variance) const;
  Var apply(Var raw) const;
};

struct ModelConfig {
  std::size_t x_dim = 2;
  std::size_t z_dim = 2;
  MlpSpec encoder;
  MlpSpec decoder;
  MlpSpec discriminator;
  bool decoder_only = false;
  LogVarianceClamp clamp;

  // Encoder/decoder: 2 hidden layers of 64, leaky-relu, Gaussian heads.
  // Discriminator: 3 hidden layers of 128, relu, scalar output.
  static ModelConfig toy_default(std::size_t x_dim = 2, std::size_t z_dim = 2,
                                 bool decoder_only = false);
  static MlpSpec gaussian_head_spec(std::size_t in, std::size_t out,
                                    std::vector<std::size_t> hidden,
                                    Activation activation);
  static MlpSpec critic_spec(std::size_t in, std::vector<std::size_t> hidden,
                             Activation activation);
  void validate() const;
};

struct ModelTriple {
  ModelConfig config;
  ParameterSet encoder;  // empty for decoder-only models
  ParameterSet decoder;
  ParameterSet discriminator;

  static ModelTriple initialize(const ModelConfig& config, std::uint64_t seed);
  bool has_encoder() const { return !encoder.empty(); }
};

struct GaussianHeads {
  Var mean;
  Var log_variance;
};

// Batched graph forms. Inputs are [n, dim] rows.
GaussianHeads encoder_heads(const ModelTriple& triple,
                            const BoundParameters& encoder, Var x);
GaussianHeads decoder_heads(const ModelTriple& triple,
                            const BoundParameters& decoder, Var z);
// Raw discriminator output before the sigmoid, shape [n]. `z` is ignored for
// decoder-only models.
Var discriminator_logits(const ModelTriple& triple,
                         const BoundParameters& discriminator, Var x, Var z);

struct Draw {
  std::vector<double> sample;
  DiagonalGaussian density;
};

Draw encode(const ModelTriple& triple, std::span<const double> x,
            std::span<const double> eps);
Draw decode(const ModelTriple& triple, std::span<const double> z,
            std::span<const double> eps);
double discriminate(const ModelTriple& triple, std::span<const double> x,
                    std::span<const double> z);

// Value-only batched passes.
struct BatchDraw {
  Tensor sample;
  Tensor mean;
  Tensor log_variance;
};
BatchDraw encode_batch(const ModelTriple& triple, const Tensor& x,
                       const Tensor& eps);
BatchDraw decode_batch(const ModelTriple& triple, const Tensor& z,
                       const Tensor& eps);
Tensor discriminate_batch(const ModelTriple& triple, const Tensor& x,
                          const Tensor& z);

}  // namespace svae
