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

#include "svae/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "svae/identities.hpp"
#include "svae/linear_gaussian.hpp"
#include "svae/models.hpp"
#include "svae/objectives.hpp"
#include "svae/training.hpp"

namespace svae {
namespace {

LinearGaussianSpec random_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 3);
  const std::size_t dx = dim(rng), dz = dim(rng);
  return LinearGaussianSpec::random(dx, dz, rng);
}

// Held-out points in the region where both joints have mass: a 4-level grid
// per coordinate in the whitened frame of the averaged joint.
std::vector<Eigen::VectorXd> held_out_points(const LinearGaussianSpec& model,
                                             std::mt19937_64& rng) {
  const auto jp = model.joint_p();
  const auto jq = model.joint_q();
  const Eigen::VectorXd mu = 0.5 * (jp.mean + jq.mean);
  const Eigen::MatrixXd cov = 0.5 * (jp.covariance + jq.covariance);
  const Eigen::MatrixXd L = cov.llt().matrixL();
  const std::size_t D = jp.dim();
  std::vector<Eigen::VectorXd> out;
  if (D <= 4) {
    const double levels[] = {-1.5, -0.5, 0.5, 1.5};
    std::size_t total = 1;
    for (std::size_t i = 0; i < D; ++i) total *= 4;
    for (std::size_t idx = 0; idx < total; ++idx) {
      Eigen::VectorXd u(D);
      std::size_t rest = idx;
      for (std::size_t i = 0; i < D; ++i) {
        u(static_cast<Eigen::Index>(i)) = levels[rest % 4];
        rest /= 4;
      }
      out.push_back(mu + L * u);
    }
  } else {
    for (int i = 0; i < 512; ++i) out.push_back(mu + L * standard_normal(D, rng));
  }
  return out;
}

double ratio_correlation(const LinearGaussianSpec& model, const RatioFit& fit,
                         std::mt19937_64& rng) {
  const auto jp = model.joint_p();
  const auto jq = model.joint_q();
  const auto pts = held_out_points(model, rng);
  const std::size_t D = jp.dim();
  std::vector<double> rows;
  std::vector<double> truth;
  for (const auto& p : pts) {
    rows.insert(rows.end(), p.data(), p.data() + D);
    truth.push_back(jp.log_pdf(p) - jq.log_pdf(p));
  }
  const Tensor f = fit.evaluate(Tensor::matrix(pts.size(), D, std::move(rows)));
  return pearson(truth, std::vector<double>(f.values().begin(), f.values().end()));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double direct_log_sigmoid(double f) { return std::log(1.0 / (1.0 + std::exp(-f))); }
double direct_log_one_minus_sigmoid(double f) {
  return std::log(1.0 - 1.0 / (1.0 + std::exp(-f)));
}

double avg(const Tensor& t, double (*fn)(double)) {
  double acc = 0.0;
  for (double v : t.values()) acc += fn(v);
  return acc / static_cast<double>(t.size());
}

// Largest gap between the transformed-objective code paths and the direct
// ALI and GAN formulas on shared batches.
double reduction_gap(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const bool decoder_only : {false, true}) {
    const auto config = ModelConfig::toy_default(2, 2, decoder_only);
    const auto triple = ModelTriple::initialize(config, rng());
    const Tensor data = standard_normal_matrix(64, 2, rng);
    const auto batch = draw_batch(triple, data, rng);
    const Tensor f_q = discriminate_batch(triple, batch.q_x, batch.q_z);
    const Tensor f_p = discriminate_batch(triple, batch.p_x, batch.p_z);
    // max_psi E_p log sigma(f) + E_q log(1 - sigma(f)).
    const double saddle = avg(f_p, direct_log_sigmoid) + avg(f_q, direct_log_one_minus_sigmoid);
    const auto spec = ObjectiveSpec::make(decoder_only ? Variant::kGan : Variant::kAli);
    worst = std::max(worst, std::abs(discriminator_objective(spec, triple, batch).value() - saddle));
    if (decoder_only) {
      // Original GAN generator: minimize the saddle value.
      worst = std::max(worst, std::abs(generator_objective(spec, triple, batch).value() + saddle));
    } else {
      // ALI generator with the log-sigmoid transform.
      const double ali = avg(f_q, direct_log_sigmoid) + avg(f_p, direct_log_one_minus_sigmoid);
      worst = std::max(worst, std::abs(generator_objective(spec, triple, batch).value() - ali));
    }
  }
  return worst;
}

}  // namespace

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<CheckResult> run_verification(const VerifyOptions& options,
                                          std::ostream* log) {
  using Clock = std::chrono::steady_clock;
  std::vector<CheckResult> results;
  auto record = [&](CheckResult r, Clock::time_point start) {
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (log) {
      *log << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail
           << "  (" << fmt(r.seconds) << " s)\n";
      log->flush();
    }
    results.push_back(std::move(r));
  };

  std::mt19937_64 rng(options.seed);
  std::vector<LinearGaussianSpec> models;
  for (std::size_t i = 0; i < options.n_models; ++i) models.push_back(random_model(rng));

  for (auto identity : all_decompositions()) {
    const auto start = Clock::now();
    CheckResult r;
    r.name = std::string("decomposition ") + decomposition_name(identity);
    std::size_t ok = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto rep = evaluate_decomposition(models[i], identity, options.n_samples, rng());
      if (rep.within(3.0)) ++ok;
      if (rep.standard_error > 0.0) {
        worst = std::max(worst, std::abs(rep.gap()) / rep.standard_error);
      }
    }
    r.passed = ok == models.size();
    r.detail = std::to_string(ok) + "/" + std::to_string(models.size()) +
               " models within 3 SE, worst |gap|/SE " + fmt(worst);
    record(std::move(r), start);
  }

  {
    const auto start = Clock::now();
    CheckResult r;
    r.name = "symmetric KL additivity";
    double worst = 0.0;
    for (const auto& m : models) {
      const auto jp = m.joint_p();
      const auto jq = m.joint_q();
      const double direct = full_gaussian_symmetric_kl(jp, jq);
      const double sum = full_gaussian_kl(jq, jp) + full_gaussian_kl(jp, jq);
      worst = std::max(worst, std::abs(direct - sum));
    }
    r.passed = worst <= 1e-10;
    r.detail = "max |KL_s - (KL(q||p) + KL(p||q))| = " + fmt(worst);
    record(std::move(r), start);
  }

  {
    const auto start = Clock::now();
    CheckResult r;
    r.name = "symmetric KL estimator with analytic ratio";
    std::size_t ok = 0;
    const std::size_t n_check = std::min<std::size_t>(models.size(), 5);
    for (std::size_t i = 0; i < n_check; ++i) {
      const auto& m = models[i];
      std::vector<double> fp, fq;
      fp.reserve(options.n_samples);
      fq.reserve(options.n_samples);
      for (std::size_t s = 0; s < options.n_samples; ++s) {
        const auto a = sample_joint_p(m, rng);
        fp.push_back(analytic_log_ratio(m, {a.x.data(), static_cast<std::size_t>(a.x.size())},
                                        {a.z.data(), static_cast<std::size_t>(a.z.size())}));
        const auto b = sample_joint_q(m, rng);
        fq.push_back(analytic_log_ratio(m, {b.x.data(), static_cast<std::size_t>(b.x.size())},
                                        {b.z.data(), static_cast<std::size_t>(b.z.size())}));
      }
      const auto est = symmetric_kl_estimate(fp, fq);
      const double truth = full_gaussian_symmetric_kl(m.joint_p(), m.joint_q());
      if (std::abs(est.estimate - truth) <= 3.0 * est.standard_error) ++ok;
    }
    r.passed = ok == n_check;
    r.detail = std::to_string(ok) + "/" + std::to_string(n_check) + " models within 3 SE";
    record(std::move(r), start);
  }

  {
    const auto start = Clock::now();
    CheckResult r;
    r.name = "trained discriminator recovers the log ratio";
    std::size_t ok = 0;
    double lowest = 1.0;
    for (std::size_t i = 0; i < options.ratio_models; ++i) {
      const auto m = LinearGaussianSpec::random(2, 1 + i % 2, rng);
      RatioFitConfig cfg;
      cfg.steps = options.ratio_steps;
      cfg.seed = rng();
      const auto fit = fit_log_ratio(m, cfg);
      const double rho = ratio_correlation(m, fit, rng);
      lowest = std::min(lowest, rho);
      if (rho > 0.95) ++ok;
    }
    r.passed = ok == options.ratio_models;
    r.detail = std::to_string(ok) + "/" + std::to_string(options.ratio_models) +
               " models with Pearson > 0.95, lowest " + fmt(lowest);
    record(std::move(r), start);
  }

  {
    const auto start = Clock::now();
    CheckResult r;
    r.name = "ALI and GAN reductions";
    const double gap = reduction_gap(rng());
    r.passed = gap <= 1e-10;
    r.detail = "max gap to direct formulas " + fmt(gap);
    record(std::move(r), start);
  }
  return results;
}

}  // namespace svae
