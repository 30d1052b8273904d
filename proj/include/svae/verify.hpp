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

// The closed-form verification suite behind `svae_lab verify`.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace svae {

struct VerifyOptions {
  std::size_t n_models = 20;
  std::size_t n_samples = 100000;
  std::size_t ratio_models = 5;
  std::size_t ratio_steps = 3000;
  std::uint64_t seed = 0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Decomposition identities, symmetric-KL additivity, the symmetric-KL
// estimator with the analytic ratio, the trained-discriminator ratio check and
// the ALI/GAN reduction equalities. Progress lines go to `log` when given.
std::vector<CheckResult> run_verification(const VerifyOptions& options,
                                          std::ostream* log = nullptr);

// Pearson correlation of two equally sized samples.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace svae
