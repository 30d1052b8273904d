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

#include "svae/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "svae/checkpoint.hpp"
#include "svae/error.hpp"
#include "svae/metrics.hpp"
#include "svae/verify.hpp"

namespace svae {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw ConfigError("cannot write " + tmp.string());
    os << text;
    if (!os) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json metrics_json(const MetricsRecord& m) {
  return {{"step", m.step},
          {"mse", optional_json(m.mse)},
          {"modes_covered", m.modes_covered},
          {"high_quality_fraction", m.high_quality_fraction},
          {"is_analog", m.is_analog},
          {"iw_loglik", optional_json(m.iw_loglik)},
          {"skl_estimate", m.skl_estimate},
          {"gen_grad_norm_raw_f", optional_json(m.gen_grad_norm_raw_f)},
          {"gen_grad_norm_log_sigmoid", optional_json(m.gen_grad_norm_log_sigmoid)}};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(s);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  for (auto cell : split(text, ',')) {
    cell = trim(cell);
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
      throw ConfigError("--lambda: malformed value '" + cell + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--lambda: empty list");
  return out;
}

std::string normalize_label(std::string s) {
  s = trim(s);
  std::string out;
  for (char c : s) {
    out.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (out == "svaer") out = "svae-r";
  return out;
}

// Objective for a sweep label at a given lambda.
ObjectiveSpec objective_for(const std::string& label, double lambda) {
  if (label == "svae-r") return ObjectiveSpec::make(Variant::kSvaeR, lambda);
  if (label == "ali") {
    if (lambda == 0.0) return ObjectiveSpec::make(Variant::kAli);
    auto spec = ObjectiveSpec::make(Variant::kSvaeR, lambda);
    spec.generator_transform = GeneratorTransform::kLogSigmoid;
    return spec;
  }
  if (label == "svae") return ObjectiveSpec::make(Variant::kSvae, lambda);
  if (label == "gan") return ObjectiveSpec::make(Variant::kGan, lambda);
  if (label == "wgan") return ObjectiveSpec::make(Variant::kWgan, lambda);
  throw ConfigError("--variants: unknown variant '" + label +
                    "' (expected svae-r, ali, svae, gan or wgan)");
}

PointSet dataset_for(const RunConfig& cfg) {
  return sample_dataset(build_toy_gmm(cfg.data), cfg.data.n_samples, cfg.data.seed);
}

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::size_t jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON run configuration");
  app->add_option("--seed", c.seed, "Seed override");
  app->add_option("--output", c.output, "Output directory");
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

RunConfig base_config(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? parse_config("{}") : load_config(c.config_path);
  if (!c.output.empty()) cfg.output_dir = c.output;
  return cfg;
}

int cmd_generate(const Common& c, std::ostream& out) {
  RunConfig cfg = base_config(c);
  if (c.seed) cfg.data.seed = *c.seed;
  cfg.validate();
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const auto gmm = build_toy_gmm(cfg.data);
  const auto points = sample_dataset(gmm, cfg.data.n_samples, cfg.data.seed);
  write_dataset(points, dir / "data.csv");
  json spec = {{"format_version", kFormatVersion},
               {"n_components", cfg.data.n_components},
               {"dim", cfg.data.dim},
               {"component_std", cfg.data.component_std},
               {"ring_radius", cfg.data.ring_radius},
               {"n_samples", cfg.data.n_samples},
               {"seed", cfg.data.seed},
               {"weights", gmm.weights},
               {"means", gmm.means},
               {"variances", gmm.variances}};
  const auto entropy = estimate_data_log_density(gmm, points);
  spec["mean_log_density"] = entropy.mean_log_density;
  spec["mean_log_density_standard_error"] = entropy.standard_error;
  write_text_atomic(dir / "data_spec.json", spec.dump(2) + "\n");
  write_text_atomic(dir / "config.json", config_to_json(cfg) + "\n");
  out << "wrote " << points.size() << " points to " << (dir / "data.csv").string() << "\n";
  return kExitOk;
}

int cmd_train(const Common& c, const std::string& variant,
              const std::optional<double>& lambda,
              const std::optional<std::size_t>& steps, const std::string& data_path,
              std::ostream& out, std::ostream& err) {
  RunConfig cfg = base_config(c);
  if (!variant.empty() || lambda) {
    const std::string label = variant.empty() ? "" : normalize_label(variant);
    const double lam = lambda.value_or(cfg.objective.lambda);
    if (label.empty()) {
      cfg.objective.lambda = lam;
    } else {
      const bool was_wgan = cfg.objective.variant == Variant::kWgan;
      cfg.objective = objective_for(label, lam);
      if (cfg.objective.variant == Variant::kWgan && !was_wgan) {
        cfg.train.disc_steps_per_gen_step = 5;
      }
    }
  }
  if (steps) cfg.train.total_generator_steps = *steps;
  if (c.seed) cfg.train.seed = *c.seed;
  cfg.validate();
  const PointSet data = data_path.empty() ? dataset_for(cfg) : read_dataset(data_path);
  const auto outcome = execute_run(cfg, data, cfg.output_dir, &out);
  if (!outcome.ok) {
    err << "error: " << outcome.error << "\n";
    return kExitFailure;
  }
  out << "run complete: " << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_sweep(const Common& c, const std::string& lambdas_text, std::size_t n_seeds,
              const std::string& variants_text,
              const std::optional<std::size_t>& steps, std::ostream& out,
              std::ostream& err) {
  RunConfig base = base_config(c);
  if (steps) base.train.total_generator_steps = *steps;
  if (c.output.empty()) base.output_dir = "runs/sweep";
  const auto lambdas = parse_lambdas(lambdas_text);
  std::vector<std::string> labels;
  for (const auto& v : split(variants_text, ',')) labels.push_back(normalize_label(v));
  const std::uint64_t base_seed = c.seed.value_or(base.train.seed);
  const auto plan = plan_sweep(base, labels, lambdas, n_seeds, base_seed);

  const fs::path root = base.output_dir;
  fs::create_directories(root);
  write_text_atomic(root / "sweep_config.json", config_to_json(base) + "\n");
  const PointSet data = dataset_for(base);

  std::vector<RunOutcome> outcomes(plan.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size()) return;
      const auto start = std::chrono::steady_clock::now();
      outcomes[i] = execute_run(plan[i].config, data, root / plan[i].dir_name, nullptr);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::lock_guard<std::mutex> lock(io);
      out << "[" << (i + 1) << "/" << plan.size() << "] " << plan[i].dir_name << " "
          << (outcomes[i].ok ? "ok" : "aborted: " + outcomes[i].error) << " ("
          << static_cast<long>(secs) << " s)\n";
      out.flush();
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(c.jobs, plan.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::ostringstream csv;
  csv << "run_index,run_variant,objective,transform,lambda,seed,status,steps,mse,"
         "mode_coverage,high_quality_fraction,is_analog,skl_estimate,iw_loglik,"
         "run_dir,error\n";
  std::size_t aborted = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& e = plan[i];
    const auto& o = outcomes[i];
    if (!o.ok) ++aborted;
    csv << e.index << ',' << e.label << ',' << variant_name(e.config.objective.variant)
        << ',' << transform_name(e.config.objective.generator_transform) << ','
        << num(e.config.objective.lambda) << ',' << e.config.train.seed << ','
        << (o.ok ? "ok" : "aborted") << ',' << o.steps_completed << ',';
    if (o.final_row) {
      const auto& m = o.final_row->metrics;
      csv << (m.mse ? num(*m.mse) : "") << ',' << m.modes_covered << ','
          << num(m.high_quality_fraction) << ',' << num(m.is_analog) << ','
          << num(m.skl_estimate) << ',' << (m.iw_loglik ? num(*m.iw_loglik) : "");
    } else {
      csv << ",,,,,";
    }
    std::string error = o.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    csv << ',' << e.dir_name << ',' << error << '\n';
  }
  write_text_atomic(root / "sweep_summary.csv", csv.str());
  out << "sweep complete: " << plan.size() << " runs, " << aborted
      << " aborted; summary in " << (root / "sweep_summary.csv").string() << "\n";
  if (aborted > 0) {
    err << "warning: " << aborted << " run(s) aborted on non-finite values\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_eval(const Common& c, const std::string& checkpoint_path, std::ostream& out) {
  if (checkpoint_path.empty()) throw ConfigError("eval: --checkpoint is required");
  const auto ck = read_checkpoint(checkpoint_path);
  const RunConfig& cfg = ck.config;
  const std::uint64_t seed = c.seed.value_or(cfg.train.seed);
  std::seed_seq seq{seed, std::uint64_t{2}};
  std::mt19937_64 rng(seq);
  const auto gmm = build_toy_gmm(cfg.data);
  const PointSet real = sample_dataset(gmm, cfg.train.eval_size, rng());
  MetricsRecord rec = evaluate_metrics(ck.triple, real, gmm, cfg.train.eval_size,
                                       std::max<std::size_t>(cfg.train.iw_samples, 1), rng);
  rec.step = cfg.train.total_generator_steps;
  const auto batch = draw_batch(
      ck.triple, real.gather(std::vector<std::size_t>([&] {
        std::vector<std::size_t> idx(std::min<std::size_t>(real.size(), cfg.train.batch_size));
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        return idx;
      }())),
      rng);
  const auto probe = gradient_norm_probe(ck.triple, batch, {0});
  if (!probe.empty() && probe.front().ok) {
    rec.gen_grad_norm_raw_f = probe.front().raw_f_norm;
    rec.gen_grad_norm_log_sigmoid = probe.front().log_sigmoid_norm;
  }
  rec.check(gmm.n_components());
  json j = metrics_json(rec);
  j["format_version"] = kFormatVersion;
  j["variant"] = variant_name(cfg.objective.variant);
  j["lambda"] = cfg.objective.lambda;
  j["seed"] = seed;
  const std::string text = j.dump(2) + "\n";
  if (!c.output.empty()) {
    fs::create_directories(c.output);
    write_text_atomic(fs::path(c.output) / "metrics.json", text);
  }
  out << text;
  return kExitOk;
}

int cmd_verify(const Common& c, const VerifyOptions& base, std::ostream& out) {
  VerifyOptions opt = base;
  if (c.seed) opt.seed = *c.seed;
  const auto results = run_verification(opt, &out);
  bool all = true;
  json report = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    report.push_back({{"check", r.name},
                      {"passed", r.passed},
                      {"detail", r.detail},
                      {"seconds", r.seconds}});
  }
  if (!c.output.empty()) {
    fs::create_directories(c.output);
    json doc = {{"format_version", kFormatVersion}, {"seed", opt.seed}, {"checks", report}};
    write_text_atomic(fs::path(c.output) / "verify_report.json", doc.dump(2) + "\n");
  }
  out << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
  return all ? kExitOk : kExitFailure;
}

struct Stat {
  std::size_t n = 0;
  double sum = 0.0, lo = 0.0, hi = 0.0;
  void add(double v) {
    lo = n == 0 ? v : std::min(lo, v);
    hi = n == 0 ? v : std::max(hi, v);
    sum += v;
    ++n;
  }
  std::string cells() const {
    if (n == 0) return ",,";
    return num(sum / static_cast<double>(n)) + "," + num(lo) + "," + num(hi);
  }
};

int cmd_report(const Common& c, const std::string& input, std::ostream& out,
               std::ostream& err) {
  const fs::path root = input.empty() ? fs::path(c.output) : fs::path(input);
  if (root.empty()) throw ConfigError("report: --input <sweep dir> is required");
  const fs::path summary = root / "sweep_summary.csv";
  std::ifstream is(summary);
  if (!is) throw ConfigError("report: cannot open " + summary.string());
  std::string line;
  std::getline(is, line);
  const auto header = split(trim(line), ',');
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ConfigError(summary.string() + ":1: missing column " + name);
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_label = col("run_variant"), c_lambda = col("lambda"),
                    c_status = col("status"), c_dir = col("run_dir");
  const std::vector<std::string> metrics = {"mse", "mode_coverage", "high_quality_fraction",
                                            "is_analog", "skl_estimate"};
  std::vector<std::size_t> c_metrics;
  for (const auto& m : metrics) c_metrics.push_back(col(m));

  struct Group {
    std::size_t runs = 0, aborted = 0;
    std::vector<Stat> stats;
  };
  std::map<std::pair<std::string, double>, Group> groups;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() < header.size()) {
      err << "warning: " << summary.string() << ":" << lineno << ": short row skipped\n";
      continue;
    }
    if (!fs::exists(root / cells[c_dir])) {
      err << "warning: run directory " << cells[c_dir] << " is missing; skipped\n";
      continue;
    }
    double lambda = 0.0;
    std::from_chars(cells[c_lambda].data(), cells[c_lambda].data() + cells[c_lambda].size(),
                    lambda);
    auto& g = groups[{cells[c_label], lambda}];
    g.stats.resize(metrics.size());
    ++g.runs;
    if (cells[c_status] != "ok") {
      ++g.aborted;
      continue;
    }
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      const auto& cell = cells[c_metrics[k]];
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (!cell.empty() && res.ec == std::errc()) g.stats[k].add(v);
    }
  }

  std::ostringstream csv;
  csv << "run_variant,lambda,runs,aborted";
  for (const auto& m : metrics) csv << ',' << m << "_mean," << m << "_min," << m << "_max";
  csv << '\n';
  for (const auto& [key, g] : groups) {
    csv << key.first << ',' << num(key.second) << ',' << g.runs << ',' << g.aborted;
    for (const auto& s : g.stats) csv << ',' << s.cells();
    csv << '\n';
  }
  write_text_atomic(root / "report.csv", csv.str());
  out << csv.str();
  return kExitOk;
}

}  // namespace

std::vector<SweepEntry> plan_sweep(const RunConfig& base,
                                   const std::vector<std::string>& labels,
                                   const std::vector<double>& lambdas,
                                   std::size_t n_seeds, std::uint64_t base_seed) {
  if (labels.empty()) throw ConfigError("--variants: empty list");
  if (n_seeds < 1) throw ConfigError("--seeds must be >= 1");
  std::vector<SweepEntry> plan;
  for (const auto& label : labels) {
    for (double lambda : lambdas) {
      for (std::size_t s = 0; s < n_seeds; ++s) {
        SweepEntry e;
        e.index = plan.size();
        e.label = label;
        e.config = base;
        e.config.objective = objective_for(label, lambda);
        if (e.config.objective.variant == Variant::kWgan &&
            base.objective.variant != Variant::kWgan) {
          e.config.train.disc_steps_per_gen_step = 5;
        }
        e.config.train.seed = base_seed + e.index;
        try {
          e.config.validate();
        } catch (const ConfigError& err) {
          throw ConfigError("sweep entry " + label + " lambda=" + num(lambda) + ": " +
                            err.what());
        }
        std::ostringstream name;
        name << "run" << std::setw(3) << std::setfill('0') << e.index << '_' << label
             << "_lambda" << num(lambda) << "_seed" << e.config.train.seed;
        e.dir_name = name.str();
        e.config.output_dir = (fs::path(base.output_dir) / e.dir_name).string();
        plan.push_back(std::move(e));
      }
    }
  }
  return plan;
}

RunOutcome execute_run(const RunConfig& config, const PointSet& data,
                       const fs::path& dir, std::ostream* progress) {
  RunOutcome outcome;
  fs::create_directories(dir);
  write_text_atomic(dir / "config.json", config_to_json(config) + "\n");
  const auto gmm = build_toy_gmm(config.data);
  auto triple = ModelTriple::initialize(config.model_config(), config.train.seed);
  std::vector<LogRow> partial;
  const auto start = std::chrono::steady_clock::now();
  auto on_eval = [&](const LogRow& row) {
    partial.push_back(row);
    if (progress) {
      *progress << "step " << row.step << "  disc " << row.disc_loss << "  gen "
                << row.gen_loss << "  modes " << row.metrics.modes_covered << "  is "
                << row.metrics.is_analog;
      if (row.metrics.mse) *progress << "  mse " << *row.metrics.mse;
      *progress << "\n";
      progress->flush();
    }
  };
  json summary = {{"format_version", kFormatVersion},
                  {"variant", variant_name(config.objective.variant)},
                  {"generator_transform", transform_name(config.objective.generator_transform)},
                  {"lambda", config.objective.lambda},
                  {"seed", config.train.seed},
                  {"data_seed", config.data.seed}};
  try {
    auto result = train_run(std::move(triple), config.objective, data, gmm, config.train, on_eval);
    write_log_csv(result.log, dir / "metrics.csv");
    write_checkpoint(dir / "checkpoint.txt", config, result.triple);
    outcome.ok = true;
    outcome.steps_completed = config.train.total_generator_steps;
    summary["status"] = "ok";
  } catch (const TrainingAborted& e) {
    write_log_csv(partial, dir / "metrics.csv");
    outcome.error = e.what();
    outcome.steps_completed = e.step() > 0 ? e.step() - 1 : 0;
    summary["status"] = "aborted";
    summary["error"] = e.what();
    summary["abort_step"] = e.step();
    summary["abort_phase"] = e.phase();
  }
  if (!partial.empty()) {
    outcome.final_row = partial.back();
    summary["final"] = metrics_json(partial.back().metrics);
  }
  summary["steps_completed"] = outcome.steps_completed;
  summary["elapsed_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text_atomic(dir / "summary.json", summary.dump(2) + "\n");
  return outcome;
}

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"svae_lab: symmetric VAE and adversarial-inference toy laboratory"};
  app.name("svae_lab");
  app.require_subcommand(1);

  Common common;
  auto* gen = app.add_subcommand("generate-data", "Write the toy dataset CSV and its spec JSON");
  add_common(gen, common);

  std::string variant, data_path;
  std::optional<double> lambda;
  std::optional<std::size_t> steps;
  auto* train = app.add_subcommand("train", "Run one training job");
  add_common(train, common);
  train->add_option("--variant", variant, "svae, svae-r, ali, gan or wgan");
  train->add_option("--lambda", lambda, "Weight of the conditional log-likelihood terms");
  train->add_option("--steps", steps, "Override train.total_generator_steps");
  train->add_option("--data", data_path, "Dataset CSV (default: generate from config)");

  std::string lambdas_text = "0,0.01,0.1", variants_text = "svae-r,ali";
  std::size_t n_seeds = 3;
  auto* sweep = app.add_subcommand("sweep", "Run variants x lambdas x seeds");
  add_common(sweep, common);
  sweep->add_option("--lambda", lambdas_text, "Comma-separated lambda values");
  sweep->add_option("--seeds", n_seeds, "Seeds per (variant, lambda)");
  sweep->add_option("--variants", variants_text, "Comma-separated variants");
  sweep->add_option("--steps", steps, "Override train.total_generator_steps");

  std::string checkpoint_path;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint and print MetricsRecord JSON");
  add_common(eval, common);
  eval->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "Run the closed-form verification suite");
  add_common(verify, common);
  verify->add_option("--models", verify_opt.n_models, "Random linear-Gaussian models");
  verify->add_option("--samples", verify_opt.n_samples, "Monte Carlo samples per term");
  verify->add_option("--ratio-models", verify_opt.ratio_models,
                     "Models for the discriminator ratio check");
  verify->add_option("--ratio-steps", verify_opt.ratio_steps,
                     "Training steps per ratio discriminator");

  std::string report_input;
  auto* report = app.add_subcommand("report", "Aggregate a sweep into per-lambda tables");
  add_common(report, common);
  report->add_option("--input", report_input, "Sweep directory");

  std::vector<std::string> argv_store;
  argv_store.push_back("svae_lab");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(common, out);
    if (*train) return cmd_train(common, variant, lambda, steps, data_path, out, err);
    if (*sweep) return cmd_sweep(common, lambdas_text, n_seeds, variants_text, steps, out, err);
    if (*eval) return cmd_eval(common, checkpoint_path, out);
    if (*verify) return cmd_verify(common, verify_opt, out);
    if (*report) return cmd_report(common, report_input, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingAborted& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace svae
