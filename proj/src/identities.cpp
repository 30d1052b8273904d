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

#include "svae/identities.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "svae/error.hpp"

namespace svae {
namespace {

struct MeanWithError {
  double mean = 0.0;
  double standard_error = 0.0;
};

// E_{c ~ marginal} kl(c) by Monte Carlo.
MeanWithError expected_conditional_kl(const FullGaussian& marginal,
                                      const ConditionalKl& kl, std::size_t n,
                                      std::mt19937_64& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(marginal.covariance);
  if (llt.info() != Eigen::Success) {
    throw DomainError("evaluate_decomposition: degenerate marginal");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd c = marginal.mean + L * standard_normal(marginal.dim(), rng);
    const double v = kl(c);
    sum += v;
    sq += v * v;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sq - nn * mean * mean) / (nn - 1.0));
  return {mean, std::sqrt(var / nn)};
}

}  // namespace

const char* decomposition_name(Decomposition d) {
  switch (d) {
    case Decomposition::kKlViaData: return "kl-via-data";
    case Decomposition::kKlViaLatent: return "kl-via-latent";
    case Decomposition::kSymmetricViaLatent: return "symmetric-via-latent";
    case Decomposition::kSymmetricViaData: return "symmetric-via-data";
  }
  return "unknown";
}

Decomposition parse_decomposition(std::string_view name) {
  std::string key;
  for (char c : name) {
    key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(
                                       static_cast<unsigned char>(c))));
  }
  for (auto d : all_decompositions()) {
    if (key == decomposition_name(d)) return d;
  }
  throw ConfigError("unknown decomposition '" + std::string(name) +
                    "' (expected kl-via-data, kl-via-latent, "
                    "symmetric-via-latent or symmetric-via-data)");
}

std::vector<Decomposition> all_decompositions() {
  return {Decomposition::kKlViaData, Decomposition::kKlViaLatent,
          Decomposition::kSymmetricViaLatent, Decomposition::kSymmetricViaData};
}

bool DecompositionReport::within(double k) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(lhs));
  return std::abs(gap()) <= k * standard_error + slack;
}

DecompositionReport evaluate_decomposition(const LinearGaussianSpec& model,
                                           Decomposition identity,
                                           std::size_t n_samples,
                                           std::uint64_t seed) {
  if (n_samples < 10000) {
    throw ConfigError("evaluate_decomposition: n_samples must be >= 10000, got " +
                      std::to_string(n_samples));
  }
  model.validate();
  std::mt19937_64 rng(seed);
  const auto jp = model.joint_p();
  const auto jq = model.joint_q();

  DecompositionReport r;
  r.identity = identity;
  double var = 0.0;
  auto add_mc = [&](const char* name, const MeanWithError& m) {
    r.rhs_terms.emplace_back(name, m.mean);
    r.rhs_sum += m.mean;
    var += m.standard_error * m.standard_error;
  };
  auto add_exact = [&](const char* name, double v) {
    r.rhs_terms.emplace_back(name, v);
    r.rhs_sum += v;
  };

  switch (identity) {
    case Decomposition::kKlViaData: {
      r.lhs = full_gaussian_kl(jq, jp);
      add_mc("E_q(x) KL(q(z|x)||p(z|x))",
             expected_conditional_kl(model.data_x(),
                                     ConditionalKl(model.encoder(), model.posterior_z()),
                                     n_samples, rng));
      add_exact("KL(q(x)||p(x))", full_gaussian_kl(model.data_x(), model.marginal_x()));
      break;
    }
    case Decomposition::kKlViaLatent: {
      r.lhs = full_gaussian_kl(jq, jp);
      add_mc("E_q(z) KL(q(x|z)||p(x|z))",
             expected_conditional_kl(model.aggregate_z(),
                                     ConditionalKl(model.data_posterior_x(), model.decoder()),
                                     n_samples, rng));
      add_exact("KL(q(z)||p(z))", full_gaussian_kl(model.aggregate_z(), model.prior_z()));
      break;
    }
    case Decomposition::kSymmetricViaLatent: {
      r.lhs = full_gaussian_symmetric_kl(jp, jq);
      add_mc("E_p(z) KL(p(x|z)||q(x|z))",
             expected_conditional_kl(model.prior_z(),
                                     ConditionalKl(model.decoder(), model.data_posterior_x()),
                                     n_samples, rng));
      add_mc("E_q(z) KL(q(x|z)||p(x|z))",
             expected_conditional_kl(model.aggregate_z(),
                                     ConditionalKl(model.data_posterior_x(), model.decoder()),
                                     n_samples, rng));
      add_exact("KL_s(p(z),q(z))",
                full_gaussian_symmetric_kl(model.prior_z(), model.aggregate_z()));
      break;
    }
    case Decomposition::kSymmetricViaData: {
      r.lhs = full_gaussian_symmetric_kl(jp, jq);
      add_mc("E_p(x) KL(p(z|x)||q(z|x))",
             expected_conditional_kl(model.marginal_x(),
                                     ConditionalKl(model.posterior_z(), model.encoder()),
                                     n_samples, rng));
      add_mc("E_q(x) KL(q(z|x)||p(z|x))",
             expected_conditional_kl(model.data_x(),
                                     ConditionalKl(model.encoder(), model.posterior_z()),
                                     n_samples, rng));
      add_exact("KL_s(p(x),q(x))",
                full_gaussian_symmetric_kl(model.marginal_x(), model.data_x()));
      break;
    }
  }
  r.standard_error = std::sqrt(var);
  return r;
}

SupportCoverage support_coverage_report(const PointSet& a, const PointSet& b,
                                        double radius) {
  if (a.empty() || b.empty()) {
    throw ConfigError("support_coverage_report: point sets must be nonempty");
  }
  if (a.dim != b.dim) {
    throw ShapeError("support_coverage_report: dimension mismatch (" +
                     std::to_string(a.dim) + " vs " + std::to_string(b.dim) + ")");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("support_coverage_report: radius must be positive");
  }
  const double r2 = radius * radius;
  auto covered_fraction = [&](const PointSet& from, const PointSet& to) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const auto p = from.row(i);
      for (std::size_t j = 0; j < to.size(); ++j) {
        const auto q = to.row(j);
        double d2 = 0.0;
        for (std::size_t k = 0; k < from.dim && d2 <= r2; ++k) {
          const double t = p[k] - q[k];
          d2 += t * t;
        }
        if (d2 <= r2) {
          ++hits;
          break;
        }
      }
    }
    return static_cast<double>(hits) / static_cast<double>(from.size());
  };
  return {covered_fraction(a, b), covered_fraction(b, a)};
}

}  // namespace svae
