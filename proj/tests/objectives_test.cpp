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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "svae/error.hpp"
#include "svae/linear_gaussian.hpp"

namespace svae {
namespace {

// Plain softplus written against the textbook formula.
double softplus_ref(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
double log_sigmoid_ref(double x) { return -softplus_ref(-x); }

Tensor random_rows(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  return standard_normal_matrix(n, d, rng);
}

ModelTriple zero_critic(ModelTriple t, double bias) {
  auto& p = t.discriminator;
  const std::size_t n = p.size();
  p.tensors[n - 2] = Tensor::zeros(p.tensors[n - 2].shape());
  p.tensors[n - 1] = Tensor::filled(p.tensors[n - 1].shape(), bias);
  return t;
}

struct Fixture {
  ModelTriple triple;
  BatchPair batch;
};

Fixture make_fixture(bool decoder_only, std::uint64_t seed, std::size_t n = 16) {
  Fixture f;
  f.triple = ModelTriple::initialize(ModelConfig::toy_default(2, 2, decoder_only), seed);
  std::mt19937_64 rng(seed + 100);
  f.batch = draw_batch(f.triple, random_rows(n, 2, rng), rng);
  return f;
}

std::vector<double> flat(const std::vector<Tensor>& ts) {
  std::vector<double> out;
  for (const auto& t : ts) out.insert(out.end(), t.values().begin(), t.values().end());
  return out;
}

TEST(ObjectiveSpec, InvariantsEnforced) {
  EXPECT_NO_THROW(ObjectiveSpec::make(Variant::kSvaeR, 0.1).validate());
  EXPECT_THROW(ObjectiveSpec::make(Variant::kSvae, 0.1).validate(), ConfigError);
  EXPECT_THROW(ObjectiveSpec::make(Variant::kAli, 0.1).validate(), ConfigError);
  EXPECT_THROW(ObjectiveSpec::make(Variant::kSvaeR, -1.0).validate(), ConfigError);
  auto s = ObjectiveSpec::make(Variant::kGan);
  EXPECT_TRUE(s.decoder_only);
  s.decoder_only = false;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_TRUE(ObjectiveSpec::make(Variant::kWgan).decoder_only);
  EXPECT_FALSE(ObjectiveSpec::make(Variant::kAli).decoder_only);
  EXPECT_EQ(ObjectiveSpec::make(Variant::kSvae).generator_transform, GeneratorTransform::kRawF);
  EXPECT_EQ(ObjectiveSpec::make(Variant::kAli).generator_transform,
            GeneratorTransform::kLogSigmoid);
  EXPECT_THROW(parse_variant("vae"), ConfigError);
}

TEST(DiscriminatorObjective, ZeroCriticGivesTwoLogHalf) {
  auto f = make_fixture(false, 1);
  f.triple = zero_critic(f.triple, 0.0);
  const auto g = discriminator_objective(ObjectiveSpec::make(Variant::kSvae), f.triple, f.batch);
  EXPECT_NEAR(g.value(), 2.0 * std::log(0.5), 1e-12);
  EXPECT_NEAR(g.value(), -1.386294, 1e-6);
}

TEST(DiscriminatorObjective, WganConstantCriticGivesZero) {
  auto f = make_fixture(true, 2);
  f.triple = zero_critic(f.triple, 3.7);
  const auto g = discriminator_objective(ObjectiveSpec::make(Variant::kWgan), f.triple, f.batch);
  EXPECT_EQ(g.value(), 0.0);
}

TEST(DiscriminatorObjective, EmptyBatchRejected) {
  auto f = make_fixture(false, 3);
  BatchPair empty = f.batch;
  empty.p_z = Tensor();
  empty.p_x = Tensor();
  EXPECT_THROW(discriminator_objective(ObjectiveSpec::make(Variant::kSvae), f.triple, empty),
               ShapeError);
}

TEST(DiscriminatorObjective, GradientOnlyReachesCritic) {
  auto f = make_fixture(false, 4);
  auto g = discriminator_objective(ObjectiveSpec::make(Variant::kSvae), f.triple, f.batch);
  EXPECT_TRUE(g.discriminator.trainable);
  EXPECT_TRUE(g.encoder.vars.empty());
  EXPECT_TRUE(g.decoder.vars.empty());
  g.backward();
  EXPECT_EQ(collect_gradients(*g.graph, g.discriminator).size(), f.triple.discriminator.size());
}

TEST(GeneratorObjective, ZeroCriticNoLambdaGivesZero) {
  auto f = make_fixture(false, 5);
  f.triple = zero_critic(f.triple, 0.0);
  EXPECT_EQ(generator_objective(ObjectiveSpec::make(Variant::kSvae), f.triple, f.batch).value(),
            0.0);
}

TEST(GeneratorObjective, LambdaTermsAddExactly) {
  const auto f = make_fixture(false, 6);
  const double lambda = 0.3;
  const double base =
      generator_objective(ObjectiveSpec::make(Variant::kSvaeR, 0.0), f.triple, f.batch).value();
  const double with =
      generator_objective(ObjectiveSpec::make(Variant::kSvaeR, lambda), f.triple, f.batch)
          .value();
  // Independent evaluation through the single-row encoder and decoder.
  const std::size_t n = f.batch.q_size();
  const std::vector<double> zero{0.0, 0.0};
  double recon = 0.0, infer = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::vector<double> qx{f.batch.q_x.at(r, 0), f.batch.q_x.at(r, 1)};
    const std::vector<double> qz{f.batch.q_z.at(r, 0), f.batch.q_z.at(r, 1)};
    recon += gaussian_log_pdf(decode(f.triple, qz, zero).density, qx);
    const std::vector<double> px{f.batch.p_x.at(r, 0), f.batch.p_x.at(r, 1)};
    const std::vector<double> pz{f.batch.p_z.at(r, 0), f.batch.p_z.at(r, 1)};
    infer += gaussian_log_pdf(encode(f.triple, px, zero).density, pz);
  }
  EXPECT_NEAR(with - base, lambda * (recon / n + infer / n), 1e-10);
}

TEST(GeneratorObjective, CriticHeldFixed) {
  auto f = make_fixture(false, 7);
  auto obj = generator_objective(ObjectiveSpec::make(Variant::kSvae), f.triple, f.batch);
  EXPECT_FALSE(obj.discriminator.trainable);
  obj.backward();
  EXPECT_THROW(collect_gradients(*obj.graph, obj.discriminator), Error);
  EXPECT_EQ(collect_gradients(*obj.graph, obj.encoder).size(), f.triple.encoder.size());
  EXPECT_EQ(collect_gradients(*obj.graph, obj.decoder).size(), f.triple.decoder.size());
}

TEST(GeneratorObjective, DecoderOnlyDataTermCarriesNoGradient) {
  auto f = make_fixture(true, 8);
  const auto spec = ObjectiveSpec::make(Variant::kGan);
  auto a = generator_objective(spec, f.triple, f.batch);
  a.backward();
  BatchPair shifted = f.batch;
  std::mt19937_64 rng(9);
  shifted.q_x = random_rows(f.batch.q_size(), 2, rng);
  auto b = generator_objective(spec, f.triple, shifted);
  b.backward();
  EXPECT_NE(a.value(), b.value());
  EXPECT_EQ(flat(collect_gradients(*a.graph, a.decoder)),
            flat(collect_gradients(*b.graph, b.decoder)));
}

TEST(GeneratorObjective, ModelMismatchRejected) {
  const auto f = make_fixture(false, 10);
  EXPECT_THROW(generator_objective(ObjectiveSpec::make(Variant::kGan), f.triple, f.batch),
               ConfigError);
}

TEST(Transforms, MatchDirectFormulas) {
  const auto f = make_fixture(false, 11, 32);
  const auto fq = discriminate_batch(f.triple, f.batch.q_x, f.batch.q_z);
  const auto fp = discriminate_batch(f.triple, f.batch.p_x, f.batch.p_z);
  double raw = 0.0, ls = 0.0, mm = 0.0, disc = 0.0;
  const double n = static_cast<double>(fq.size());
  for (std::size_t i = 0; i < fq.size(); ++i) {
    raw += (fq[i] - fp[i]) / n;
    ls += (log_sigmoid_ref(fq[i]) + log_sigmoid_ref(-fp[i])) / n;
    mm += -(log_sigmoid_ref(-fq[i]) + log_sigmoid_ref(fp[i])) / n;
    disc += (std::log(1.0 - 1.0 / (1.0 + std::exp(-fq[i]))) +
             std::log(1.0 / (1.0 + std::exp(-fp[i])))) / n;
  }
  auto spec = ObjectiveSpec::make(Variant::kSvae);
  EXPECT_NEAR(generator_objective(spec, f.triple, f.batch).value(), raw, 1e-12);
  EXPECT_NEAR(discriminator_objective(spec, f.triple, f.batch).value(), disc, 1e-12);
  spec.generator_transform = GeneratorTransform::kLogSigmoid;
  EXPECT_NEAR(generator_objective(spec, f.triple, f.batch).value(), ls, 1e-12);
  spec.generator_transform = GeneratorTransform::kMinimax;
  EXPECT_NEAR(generator_objective(spec, f.triple, f.batch).value(), mm, 1e-12);
}

TEST(AnalyticLogRatio, ZeroForMatchedModel) {
  const auto spec = LinearGaussianSpec::matched(2, 2);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto x = standard_normal(2, rng);
    const auto z = standard_normal(2, rng);
    EXPECT_NEAR(analytic_log_ratio(spec, {x.data(), 2}, {z.data(), 2}), 0.0, 1e-12);
  }
}

TEST(AnalyticLogRatio, MatchesFullCovarianceOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = LinearGaussianSpec::random(2, 3, rng);
    const auto jp = spec.joint_p();
    const auto jq = spec.joint_q();
    for (int i = 0; i < 10; ++i) {
      const Eigen::VectorXd v = standard_normal(5, rng);
      const Eigen::VectorXd x = v.head(2), z = v.tail(3);
      EXPECT_NEAR(analytic_log_ratio(spec, {x.data(), 2}, {z.data(), 3}),
                  jp.log_pdf(v) - jq.log_pdf(v), 1e-9);
    }
  }
  const auto spec = LinearGaussianSpec::random(2, 2, rng);
  const std::vector<double> x{1.0}, z{1.0, 2.0};
  EXPECT_THROW(analytic_log_ratio(spec, x, z), ShapeError);
}

struct RatioDraws {
  std::vector<double> f_q, f_p;
};

RatioDraws ratio_draws(const LinearGaussianSpec& spec, int n, std::mt19937_64& rng) {
  RatioDraws d;
  for (int i = 0; i < n; ++i) {
    const auto q = sample_joint_q(spec, rng);
    d.f_q.push_back(analytic_log_ratio(spec, {q.x.data(), spec.dx()}, {q.z.data(), spec.dz()}));
    const auto p = sample_joint_p(spec, rng);
    d.f_p.push_back(analytic_log_ratio(spec, {p.x.data(), spec.dx()}, {p.z.data(), spec.dz()}));
  }
  return d;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// The log-likelihood-ratio sign reaches the Bayes rate, which the oracle
// estimates from the full-covariance densities on independent draws.
TEST(AnalyticLogRatio, SignClassifierAttainsBayesRate) {
  std::mt19937_64 rng(14);
  const auto spec = LinearGaussianSpec::random(1, 1, rng);
  const int kN = 100000;
  const auto d = ratio_draws(spec, kN / 2, rng);
  double correct = 0.0;
  for (double f : d.f_q) correct += f < 0 ? 1 : 0;
  for (double f : d.f_p) correct += f > 0 ? 1 : 0;
  const double accuracy = correct / kN;

  const auto jp = spec.joint_p();
  const auto jq = spec.joint_q();
  double bayes = 0.0;
  for (int i = 0; i < kN / 2; ++i) {
    const auto vq = jq.sample(rng);
    bayes += jq.log_pdf(vq) > jp.log_pdf(vq) ? 1 : 0;
    const auto vp = jp.sample(rng);
    bayes += jp.log_pdf(vp) > jq.log_pdf(vp) ? 1 : 0;
  }
  bayes /= kN;
  const double se = std::sqrt(2.0 * bayes * (1.0 - bayes) / kN);
  EXPECT_LT(std::abs(accuracy - bayes), 3.0 * se);

  // Any shifted threshold does no better.
  double shifted = 0.0;
  for (double f : d.f_q) shifted += f < 1.0 ? 1 : 0;
  for (double f : d.f_p) shifted += f > 1.0 ? 1 : 0;
  EXPECT_LE(shifted / kN, accuracy + 3.0 * se);
}

TEST(OptimalCritic, DiscriminatorValueMatchesBruteForce) {
  std::mt19937_64 rng(15);
  const auto spec = LinearGaussianSpec::random(2, 1, rng);
  const auto d = ratio_draws(spec, 100000, rng);
  Graph g;
  const double value = discriminator_value(ObjectiveSpec::make(Variant::kSvae),
                                           g.constant(Tensor::vector(d.f_q)),
                                           g.constant(Tensor::vector(d.f_p)))
                           .value()
                           .item();
  std::vector<double> code_q, code_p;
  for (double f : d.f_q) code_q.push_back(-softplus_ref(f));
  for (double f : d.f_p) code_p.push_back(-softplus_ref(-f));
  const double se_code = std::hypot(se_of(code_q), se_of(code_p));

  const auto big = ratio_draws(spec, 1000000, rng);
  std::vector<double> oq, op;
  for (double f : big.f_q) oq.push_back(-std::log1p(std::exp(f)));
  for (double f : big.f_p) op.push_back(-std::log1p(std::exp(-f)));
  const double oracle = mean_of(oq) + mean_of(op);
  const double se = std::hypot(se_code, std::hypot(se_of(oq), se_of(op)));
  EXPECT_LT(std::abs(value - oracle), 3.0 * se);
}

TEST(OptimalCritic, RawGeneratorValueIsMinusSymmetricKl) {
  std::mt19937_64 rng(16);
  const auto spec = LinearGaussianSpec::random(2, 2, rng);
  const auto d = ratio_draws(spec, 100000, rng);
  Graph g;
  const double ell = generator_value(ObjectiveSpec::make(Variant::kSvae),
                                     g.constant(Tensor::vector(d.f_q)),
                                     g.constant(Tensor::vector(d.f_p)))
                         .value()
                         .item();
  const double skl = full_gaussian_symmetric_kl(spec.joint_p(), spec.joint_q());
  const double se = std::hypot(se_of(d.f_q), se_of(d.f_p));
  EXPECT_LT(std::abs(ell + skl), 3.0 * se);

  const auto est = symmetric_kl_estimate(d.f_p, d.f_q);
  EXPECT_NEAR(est.estimate, -ell, 1e-9);
  EXPECT_NEAR(est.standard_error, se, 1e-3 * se);
}

TEST(SymmetricKlEstimate, MatchedModelNearZero) {
  const auto spec = LinearGaussianSpec::matched(1, 1);
  std::mt19937_64 rng(17);
  const auto d = ratio_draws(spec, 1000, rng);
  const auto est = symmetric_kl_estimate(d.f_p, d.f_q);
  EXPECT_LE(std::abs(est.estimate), 3.0 * est.standard_error + 1e-12);
  EXPECT_THROW(symmetric_kl_estimate(std::vector<double>{}, d.f_q), ShapeError);
}

TEST(SymmetricKlEstimate, NonNegativeAcrossRandomModels) {
  std::mt19937_64 rng(18);
  for (int m = 0; m < 20; ++m) {
    const auto spec = LinearGaussianSpec::random(1 + m % 2, 1 + m % 3, rng);
    const auto d = ratio_draws(spec, 5000, rng);
    const auto est = symmetric_kl_estimate(d.f_p, d.f_q);
    EXPECT_GE(est.estimate, -3.0 * est.standard_error);
  }
}

}  // namespace
}  // namespace svae
