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

// Run configuration: JSON parsing with strict key checking, defaults for
// every field and a fully resolved JSON echo.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "svae/data.hpp"
#include "svae/models.hpp"
#include "svae/objectives.hpp"
#include "svae/training.hpp"

namespace svae {

inline constexpr const char* kFormatVersion = "svae-lab/1";

struct NetworkSettings {
  std::vector<std::size_t> hidden;
  Activation activation = Activation::kLeakyRelu;
  double leaky_slope = 0.2;
};

struct ModelSettings {
  std::size_t z_dim = 2;
  NetworkSettings encoder{{64, 64}, Activation::kLeakyRelu, 0.2};
  NetworkSettings decoder{{64, 64}, Activation::kLeakyRelu, 0.2};
  NetworkSettings discriminator{{128, 128, 128}, Activation::kRelu, 0.2};
  double log_variance_min = -8.0;
  double log_variance_max = 4.0;
};

struct RunConfig {
  ObjectiveSpec objective = ObjectiveSpec::make(Variant::kSvae);
  TrainConfig train;
  ToyDatasetSpec data;
  ModelSettings model;
  std::string output_dir = "runs/default";

  // Network shapes for the configured data and objective.
  ModelConfig model_config() const;
  // Throws ConfigError naming the offending field.
  void validate() const;
  // Switches the objective and re-derives variant-dependent defaults
  // (transform, decoder_only, discriminator steps for WGAN).
  void set_variant(Variant variant, double lambda);
};

// `{}` gives the defaults. Unknown keys and type mismatches raise
// ConfigError with the JSON path of the field, e.g. "$.train.batch_size".
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Fully resolved config as a JSON document, including the format version.
std::string config_to_json(const RunConfig& config, int indent = 2);

}  // namespace svae
