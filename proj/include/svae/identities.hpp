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

// Numerical checks of the KL decompositions on linear-Gaussian pairs, and an
// empirical proxy for support containment between two point sets.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "svae/data.hpp"
#include "svae/linear_gaussian.hpp"

namespace svae {

enum class Decomposition {
  // KL(q||p) = E_q(x) KL(q(z|x)||p(z|x)) + KL(q(x)||p(x)).
  kKlViaData,
  // KL(q||p) = E_q(z) KL(q(x|z)||p(x|z)) + KL(q(z)||p(z)).
  kKlViaLatent,
  // KL_s = E_p(z) KL(p(x|z)||q(x|z)) + E_q(z) KL(q(x|z)||p(x|z))
  //        + KL_s(p(z), q(z)).
  kSymmetricViaLatent,
  // KL_s = E_p(x) KL(p(z|x)||q(z|x)) + E_q(x) KL(q(z|x)||p(z|x))
  //        + KL_s(p(x), q(x)).
  kSymmetricViaData,
};

const char* decomposition_name(Decomposition d);
Decomposition parse_decomposition(std::string_view name);
std::vector<Decomposition> all_decompositions();

struct DecompositionReport {
  Decomposition identity = Decomposition::kKlViaData;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double rhs_sum = 0.0;
  double standard_error = 0.0;

  double gap() const { return rhs_sum - lhs; }
  // |lhs - rhs_sum| <= k standard errors; exact agreement also passes.
  bool within(double k) const;
};

// lhs from the assembled joint Gaussians; expectation terms by Monte Carlo
// over the conditioning variable with closed-form conditional KLs; marginal
// terms in closed form.
DecompositionReport evaluate_decomposition(const LinearGaussianSpec& model,
                                           Decomposition identity,
                                           std::size_t n_samples,
                                           std::uint64_t seed);

struct SupportCoverage {
  double fraction_a_covered = 0.0;
  double fraction_b_covered = 0.0;
};

// Fraction of a-points within `radius` (Euclidean) of some b-point, and the
// reverse.
SupportCoverage support_coverage_report(const PointSet& a, const PointSet& b,
                                        double radius);

}  // namespace svae
