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

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is 0 when
// every selected criterion passes and 1 otherwise.
//
//   svae_acceptance [--only N]... [--full] [--runs DIR]

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "support.hpp"
#include "svae/cli.hpp"
#include "svae/config.hpp"
#include "svae/data.hpp"
#include "svae/identities.hpp"
#include "svae/linear_gaussian.hpp"
#include "svae/metrics.hpp"
#include "svae/models.hpp"
#include "svae/objectives.hpp"
#include "svae/tensor.hpp"
#include "svae/training.hpp"
#include "svae/verify.hpp"

namespace fs = std::filesystem;
using namespace svae;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Options {
  std::set<int> only;
  bool full = false;
  fs::path runs = "acceptance_runs";
};

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Dense Gaussian log-density, written out independently of the library.
double gaussian_log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                            const Eigen::MatrixXd& cov) {
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const Eigen::VectorXd d = x - mean;
  const double quad = d.dot(ldlt.solve(d));
  const double logdet = ldlt.vectorD().array().log().sum();
  return -0.5 * (static_cast<double>(x.size()) * std::log(2.0 * kPi) + logdet + quad);
}

// Joint moments of p(z) p(x|z) and q(x) q(z|x) over [x; z], assembled from
// the raw parameters.
struct JointMoments {
  Eigen::VectorXd mean_p, mean_q;
  Eigen::MatrixXd cov_p, cov_q;
};

JointMoments joint_moments(const LinearGaussianSpec& m) {
  const auto dx = static_cast<Eigen::Index>(m.dx());
  const auto dz = static_cast<Eigen::Index>(m.dz());
  JointMoments j;
  j.mean_p = Eigen::VectorXd::Zero(dx + dz);
  j.mean_p.head(dx) = m.b;
  j.cov_p = Eigen::MatrixXd::Zero(dx + dz, dx + dz);
  j.cov_p.topLeftCorner(dx, dx) =
      m.A * m.A.transpose() + m.sigma * m.sigma * Eigen::MatrixXd::Identity(dx, dx);
  j.cov_p.topRightCorner(dx, dz) = m.A;
  j.cov_p.bottomLeftCorner(dz, dx) = m.A.transpose();
  j.cov_p.bottomRightCorner(dz, dz) = Eigen::MatrixXd::Identity(dz, dz);

  const Eigen::MatrixXd S = m.S.asDiagonal();
  j.mean_q = Eigen::VectorXd::Zero(dx + dz);
  j.mean_q.head(dx) = m.m;
  j.mean_q.tail(dz) = m.C * m.m + m.d;
  j.cov_q = Eigen::MatrixXd::Zero(dx + dz, dx + dz);
  j.cov_q.topLeftCorner(dx, dx) = S;
  j.cov_q.topRightCorner(dx, dz) = S * m.C.transpose();
  j.cov_q.bottomLeftCorner(dz, dx) = m.C * S;
  j.cov_q.bottomRightCorner(dz, dz) =
      m.C * S * m.C.transpose() + m.tau * m.tau * Eigen::MatrixXd::Identity(dz, dz);
  return j;
}

// Closed-form symmetric KL between the joints; the log-determinants cancel.
double joint_symmetric_kl(const JointMoments& j) {
  const Eigen::MatrixXd pinv = j.cov_p.inverse(), qinv = j.cov_q.inverse();
  const Eigen::VectorXd dm = j.mean_p - j.mean_q;
  return 0.5 * ((qinv * j.cov_p).trace() + (pinv * j.cov_q).trace()) -
         static_cast<double>(dm.size()) + 0.5 * dm.dot((pinv + qinv) * dm);
}

LinearGaussianSpec random_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 3);
  const std::size_t dx = dim(rng), dz = dim(rng);
  return LinearGaussianSpec::random(dx, dz, rng);
}

// 1. Autodiff against central differences on random MLPs.
Outcome gradient_soundness() {
  std::mt19937_64 rng(101);
  const Activation acts[] = {Activation::kRelu, Activation::kLeakyRelu, Activation::kTanh,
                             Activation::kIdentity};
  std::size_t total = 0, good = 0;
  for (int net = 0; net < 50; ++net) {
    std::uniform_int_distribution<std::size_t> width(2, 12), depth(1, 3), io(1, 4), pick(0, 3);
    const std::size_t in = io(rng), out = io(rng);
    std::vector<std::size_t> hidden(depth(rng));
    for (auto& h : hidden) h = width(rng);
    const MlpSpec wide = ModelConfig::gaussian_head_spec(in, out, hidden, acts[pick(rng)]);
    const ParameterSet params = init_xavier(wide, rng());
    std::normal_distribution<double> n01;
    std::vector<double> xv(4 * in), wv(4 * 2 * out);
    for (auto& v : xv) v = n01(rng);
    for (auto& v : wv) v = n01(rng);
    const Tensor x = Tensor::matrix(4, in, xv);
    const Tensor w = Tensor::matrix(4, 2 * out, wv);

    // Loss: sum of w * tanh(mlp(x)), differentiated with respect to one
    // tensor at a time (every parameter and the input).
    const std::size_t n_targets = params.size() + 1;
    for (std::size_t t = 0; t < n_targets; ++t) {
      auto loss_at = [&](Graph& g, const Tensor& value, Var* target) {
        BoundParameters bound;
        Var input;
        for (std::size_t i = 0; i < params.size(); ++i) {
          if (i == t) {
            *target = g.variable(value);
            bound.vars.push_back(*target);
          } else {
            bound.vars.push_back(g.constant(params.tensors[i]));
          }
        }
        if (t == params.size()) {
          *target = g.variable(value);
          input = *target;
        } else {
          input = g.constant(x);
        }
        return sum(g.constant(w) * tanh(mlp_forward(wide, bound, input)));
      };
      const Tensor& start = t == params.size() ? x : params.tensors[t];
      Graph g;
      Var target;
      g.backward(loss_at(g, start, &target));
      const Tensor analytic = g.grad(target);
      const Tensor numeric = finite_difference_grad(
          [&](const Tensor& p) {
            Graph h;
            Var v;
            return loss_at(h, p, &v).value().item();
          },
          start, 1e-6);
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double a = analytic[i], n = numeric[i];
        const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6});
        ++total;
        good += rel < 1e-4 ? 1 : 0;
      }
    }
  }
  const double frac = static_cast<double>(good) / static_cast<double>(total);
  return {frac >= 0.99, fmt(frac * 100.0, 5) + "% of " + std::to_string(total) +
                            " coordinates within 1e-4 relative error"};
}

// 2. KL decompositions on random linear-Gaussian models.
Outcome decomposition_identities() {
  std::mt19937_64 rng(202);
  std::size_t checks = 0, within = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto model = random_model(rng);
    for (const auto id : all_decompositions()) {
      const auto r = evaluate_decomposition(model, id, 100000, rng());
      ++checks;
      within += r.within(3.0) ? 1 : 0;
      if (r.standard_error > 0.0) worst = std::max(worst, std::abs(r.gap()) / r.standard_error);
    }
  }
  return {within == checks, std::to_string(within) + "/" + std::to_string(checks) +
                                " within 3 SE, worst " + fmt(worst, 3) + " SE"};
}

// 3. Trained discriminator against the analytic log-ratio on a held-out grid.
Outcome optimal_discriminator() {
  std::mt19937_64 rng(303);
  std::vector<double> rs, kls;
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    const auto model = LinearGaussianSpec::random(2, 1 + static_cast<std::size_t>(i % 2), rng);
    RatioFitConfig cfg;
    cfg.seed = rng();
    const RatioFit fit = fit_log_ratio(model, cfg);
    const JointMoments j = joint_moments(model);
    // Whitened grid of the averaged joint, 5 levels per coordinate.
    const Eigen::VectorXd mu = 0.5 * (j.mean_p + j.mean_q);
    const Eigen::MatrixXd L = (0.5 * (j.cov_p + j.cov_q)).llt().matrixL();
    const auto D = mu.size();
    std::size_t total = 1;
    for (Eigen::Index k = 0; k < D; ++k) total *= 5;
    std::vector<double> rows, truth;
    for (std::size_t idx = 0; idx < total; ++idx) {
      Eigen::VectorXd u(D);
      std::size_t rest = idx;
      for (Eigen::Index k = 0; k < D; ++k) {
        u(k) = -1.6 + 0.8 * static_cast<double>(rest % 5);
        rest /= 5;
      }
      const Eigen::VectorXd pt = mu + L * u;
      rows.insert(rows.end(), pt.data(), pt.data() + D);
      truth.push_back(gaussian_log_density(pt, j.mean_p, j.cov_p) -
                      gaussian_log_density(pt, j.mean_q, j.cov_q));
    }
    const Tensor f = fit.evaluate(Tensor::matrix(total, static_cast<std::size_t>(D), rows));
    const double r = testing::pearson(std::vector<double>(f.values().begin(), f.values().end()),
                                      truth);
    rs.push_back(r);
    kls.push_back(joint_symmetric_kl(j));
    ok = ok && r > 0.95;
  }
  std::string d = "pearson (joint symmetric KL)";
  for (std::size_t i = 0; i < rs.size(); ++i) d += " " + fmt(rs[i]) + " (" + fmt(kls[i], 3) + ")";
  return {ok, d};
}

// 4. Symmetric-KL estimator with the analytic ratio.
Outcome symmetric_kl_estimator() {
  std::mt19937_64 rng(404);
  bool ok = true;
  std::string d;
  for (int i = 0; i < 5; ++i) {
    const auto model = random_model(rng);
    const JointMoments j = joint_moments(model);
    const double truth = joint_symmetric_kl(j);
    const std::size_t n = 100000;
    std::vector<double> fp(n), fq(n);
    for (std::size_t s = 0; s < n; ++s) {
      const auto a = sample_joint_p(model, rng);
      fp[s] = analytic_log_ratio(model, {a.x.data(), model.dx()}, {a.z.data(), model.dz()});
      const auto b = sample_joint_q(model, rng);
      fq[s] = analytic_log_ratio(model, {b.x.data(), model.dx()}, {b.z.data(), model.dz()});
    }
    const auto est = symmetric_kl_estimate(fp, fq);
    const double z = std::abs(est.estimate - truth) / est.standard_error;
    ok = ok && z < 3.0;
    d += (i ? ", " : "") + fmt(z, 3);
  }
  return {ok, "gap in SE: " + d};
}

// 5. Transformed-objective code paths against direct ALI and GAN formulas.
Outcome reduction_equalities() {
  std::mt19937_64 rng(505);
  auto ls = [](double f) { return -std::log1p(std::exp(-f)); };       // log sigmoid(f)
  auto ls_neg = [](double f) { return -std::log1p(std::exp(f)); };    // log(1 - sigmoid(f))
  auto avg = [](const Tensor& t, const std::function<double(double)>& fn) {
    double s = 0.0;
    for (double v : t.values()) s += fn(v);
    return s / static_cast<double>(t.size());
  };
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    for (const bool decoder_only : {false, true}) {
      const auto triple = ModelTriple::initialize(ModelConfig::toy_default(2, 2, decoder_only), rng());
      const Tensor data = standard_normal_matrix(128, 2, rng);
      const auto batch = draw_batch(triple, data, rng);
      const Tensor f_q = discriminate_batch(triple, batch.q_x, batch.q_z);
      const Tensor f_p = discriminate_batch(triple, batch.p_x, batch.p_z);
      // Discriminator: E_p log sigma(f) + E_q log(1 - sigma(f)).
      const double v = avg(f_p, ls) + avg(f_q, ls_neg);
      auto gap = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
      if (decoder_only) {
        const auto gan = ObjectiveSpec::make(Variant::kGan);
        gap(discriminator_objective(gan, triple, batch).value(), v);
        gap(generator_objective(gan, triple, batch).value(), -v);
      } else {
        const auto ali = ObjectiveSpec::make(Variant::kAli);
        gap(discriminator_objective(ali, triple, batch).value(), v);
        // Generator with labels swapped: E_q log sigma(f) + E_p log(1 - sigma(f)).
        const double swapped = avg(f_q, ls) + avg(f_p, ls_neg);
        gap(generator_objective(ali, triple, batch).value(), swapped);
        // sVAE-r at lambda 0 with the same transform is the same objective.
        ObjectiveSpec r = ObjectiveSpec::make(Variant::kSvaeR, 0.0);
        r.generator_transform = GeneratorTransform::kLogSigmoid;
        gap(generator_objective(r, triple, batch).value(), swapped);
      }
    }
  }
  return {worst <= 1e-10, "largest gap " + fmt(worst, 3)};
}

// Toy-study settings shared by the ordering criterion. A bounded (tanh)
// discriminator keeps f from extrapolating linearly away from the data,
// which the raw-f generator otherwise exploits.
RunConfig toy_study_base(bool full) {
  RunConfig c;
  c.model.discriminator.activation = Activation::kTanh;
  if (!full) {
    c.train.learning_rate = 2e-4;
    c.train.batch_size = 256;
    c.train.total_generator_steps = 6000;
  }
  c.train.eval_every = c.train.total_generator_steps;
  return c;
}

std::vector<RunOutcome> run_plan(const std::vector<SweepEntry>& plan, const PointSet& data,
                                 const fs::path& root) {
  std::vector<RunOutcome> out;
  for (const auto& e : plan) {
    std::cout << "  run " << e.dir_name << " ..." << std::flush;
    const auto start = std::chrono::steady_clock::now();
    out.push_back(execute_run(e.config, data, root / e.dir_name, nullptr));
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (out.back().ok ? " ok " : " aborted ") << fmt(s, 3) << " s\n";
  }
  return out;
}

// 6. Toy ordering of sVAE-r at lambda 0.1 against lambda 0 and the
// sigmoid-transform runs.
Outcome toy_ordering(const Options& opt) {
  const RunConfig base = toy_study_base(opt.full);
  const PointSet data =
      sample_dataset(build_toy_gmm(base.data), base.data.n_samples, base.data.seed);
  const fs::path root = opt.runs / "toy_ordering";
  auto svae = plan_sweep(base, {"svae-r"}, {0.0, 0.1}, 3, 600);
  auto ali = plan_sweep(base, {"ali"}, {0.1}, 3, 610);
  auto svae_out = run_plan(svae, data, root);
  auto ali_out = run_plan(ali, data, root);

  std::vector<double> mse0, mse1, is1, is_ali, modes1;
  bool complete = true;
  auto take = [&](const RunOutcome& o) -> const MetricsRecord* {
    if (!o.ok || !o.final_row) {
      complete = false;
      return nullptr;
    }
    return &o.final_row->metrics;
  };
  for (std::size_t i = 0; i < svae.size(); ++i) {
    const auto* m = take(svae_out[i]);
    if (!m) continue;
    if (svae[i].config.objective.lambda == 0.0) {
      mse0.push_back(m->mse.value_or(NAN));
    } else {
      mse1.push_back(m->mse.value_or(NAN));
      is1.push_back(m->is_analog);
      modes1.push_back(static_cast<double>(m->modes_covered));
    }
  }
  for (const auto& o : ali_out) {
    if (const auto* m = take(o)) is_ali.push_back(m->is_analog);
  }
  if (!complete || mse0.empty() || mse1.empty() || is_ali.empty()) {
    return {false, "a run aborted or produced no final metrics"};
  }
  const bool a = std::all_of(modes1.begin(), modes1.end(), [](double m) { return m == 5.0; });
  const bool b = median(mse1) < median(mse0);
  const bool c = median(is1) >= median(is_ali);
  std::string modes;
  for (double m : modes1) modes += (modes.empty() ? "" : ",") + fmt(m, 1);
  return {a && b && c, std::string("(a) modes ") + modes + (a ? " ok" : " short") +
                           "; (b) median mse " + fmt(median(mse1)) + " vs " + fmt(median(mse0)) +
                           (b ? " ok" : " not below") + "; (c) median is " + fmt(median(is1)) +
                           " vs " + fmt(median(is_ali)) + (c ? " ok" : " below")};
}

// 7. Generator gradient norms as the discriminator approaches optimality.
Outcome vanishing_gradients() {
  std::size_t good = 0, good_ns = 0;
  std::string d;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(700 + seed);
    const auto gmm = build_toy_gmm(ToyDatasetSpec{});
    auto triple = ModelTriple::initialize(ModelConfig::toy_default(), rng());
    // Badly mismatched: shift the decoder mean head far from the data ring.
    Tensor& bias = triple.decoder.tensors.back();
    for (std::size_t k = 0; k < 2; ++k) bias.data()[k] += 12.0;
    const Tensor data = sample_dataset(gmm, 256, rng()).to_tensor();
    const auto batch = draw_batch(triple, data, rng);
    const auto e = gradient_norm_probe(triple, batch, {1, 25, 100});
    if (!std::all_of(e.begin(), e.end(), [](const ProbeEntry& p) { return p.ok; })) continue;
    const bool mono = e[1].log_sigmoid_norm <= e[0].log_sigmoid_norm &&
                      e[2].log_sigmoid_norm <= e[1].log_sigmoid_norm;
    const bool ratio = e[2].raw_f_norm / e[2].log_sigmoid_norm >
                       e[0].raw_f_norm / e[0].log_sigmoid_norm;
    good += mono && ratio ? 1 : 0;
    const bool mono_ns = e[1].non_saturating_norm <= e[0].non_saturating_norm &&
                         e[2].non_saturating_norm <= e[1].non_saturating_norm;
    const bool ratio_ns = e[2].raw_f_norm / e[2].non_saturating_norm >
                          e[0].raw_f_norm / e[0].non_saturating_norm;
    good_ns += mono_ns && ratio_ns ? 1 : 0;
    d += (d.empty() ? "" : "; ") + fmt(e[0].log_sigmoid_norm, 3) + ">" +
         fmt(e[1].log_sigmoid_norm, 3) + ">" + fmt(e[2].log_sigmoid_norm, 3);
  }
  return {good >= 4, std::to_string(good) + "/5 seeds (saddle form: " + d +
                         "); non-saturating form " + std::to_string(good_ns) + "/5"};
}

// 8. Importance-weighted bound with the exact posterior.
Outcome iw_consistency() {
  std::mt19937_64 rng(808);
  Eigen::VectorXd a(2), b(2);
  a << 1.3, -0.7;
  b << 0.4, -1.1;
  const auto model = testing::exact_posterior_model(a, b, 0.6);
  PointSet pts;
  pts.dim = 2;
  std::normal_distribution<double> n01;
  double truth = 0.0;
  const std::size_t n = 2000;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd x(2);
    for (Eigen::Index k = 0; k < 2; ++k) {
      x(k) = model.marginal_mean(k) + std::sqrt(model.marginal_variance(k)) * n01(rng);
    }
    pts.values.insert(pts.values.end(), x.data(), x.data() + 2);
    truth += model.log_marginal(x) / static_cast<double>(n);
  }
  bool ok = true;
  std::string d;
  for (const std::size_t k : {1u, 16u, 64u}) {
    const auto est = iw_loglik(model.triple, pts, k, rng());
    const double gap = std::abs(est.estimate - truth);
    const bool within = gap <= 3.0 * est.standard_error || gap < 1e-9;
    ok = ok && within;
    d += (d.empty() ? "" : ", ") + ("k=" + std::to_string(k) + " gap " + fmt(gap, 3));
  }
  return {ok, d + " (closed form " + fmt(truth, 6) + ")"};
}

// 9. Default verification plus a lambda sweep over the non-WGAN variants.
Outcome stability(const Options& opt) {
  std::ostringstream log;
  const auto checks = run_verification(VerifyOptions{}, &log);
  // The gate is completion: a non-finite value in any check throws. Failed
  // checks are reported here and judged by their own criteria.
  std::size_t verify_failed = 0;
  std::string failed_names;
  for (const auto& c : checks) {
    if (c.passed) continue;
    ++verify_failed;
    failed_names += " [" + c.name + ": " + c.detail + "]";
  }

  RunConfig base;
  if (!opt.full) base.train.total_generator_steps = 1000;
  base.train.eval_every = 500;
  const PointSet data =
      sample_dataset(build_toy_gmm(base.data), base.data.n_samples, base.data.seed);
  const fs::path root = opt.runs / "stability";
  auto plan = plan_sweep(base, {"svae-r", "ali"}, {0.0, 0.01, 0.1}, 3, 900);
  const auto gan = plan_sweep(base, {"gan"}, {0.0}, 3, 950);
  plan.insert(plan.end(), gan.begin(), gan.end());
  const auto outcomes = run_plan(plan, data, root);
  std::size_t aborts = 0;
  for (const auto& o : outcomes) aborts += o.ok ? 0 : 1;
  return {aborts == 0,
          "verify completed, " + std::to_string(checks.size() - verify_failed) + "/" +
              std::to_string(checks.size()) + " checks passed" + failed_names + "; " +
              std::to_string(aborts) + " aborts in " +
              std::to_string(outcomes.size()) + " runs of " +
              std::to_string(base.train.total_generator_steps) + " steps"};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria (1-9)");
  app.add_flag("--full", opt.full, "Use the full default step budgets for training runs");
  std::string runs = opt.runs.string();
  app.add_option("--runs", runs, "Directory for training-run outputs");
  CLI11_PARSE(app, argc, argv);
  opt.only.insert(only.begin(), only.end());
  opt.runs = runs;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient soundness", gradient_soundness},
      {"decomposition identities", decomposition_identities},
      {"optimal discriminator", optimal_discriminator},
      {"symmetric-KL estimator", symmetric_kl_estimator},
      {"ALI/GAN reduction equalities", reduction_equalities},
      {"toy experiment ordering", [&] { return toy_ordering(opt); }},
      {"vanishing-gradient ordering", vanishing_gradients},
      {"IW log-likelihood consistency", iw_consistency},
      {"stability guardrails", [&] { return stability(opt); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!opt.only.empty() && !opt.only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": "
              << o.detail << " [" << fmt(s, 3) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
