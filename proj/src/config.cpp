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

#include "svae/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "svae/error.hpp"

namespace svae {
namespace {

using nlohmann::json;

// Typed access to one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(child(key), "expected a number");
      out = v->get<double>();
    }
  }
  void read(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(child(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(child(key), "expected a boolean");
      out = v->get<bool>();
    }
  }
  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(child(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void read(const std::string& key, std::vector<std::size_t>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(child(key), "expected an array of integers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const auto& e = (*v)[i];
        if (!e.is_number_unsigned()) {
          fail(child(key) + "[" + std::to_string(i) + "]",
               "expected a non-negative integer");
        }
        out.push_back(e.get<std::size_t>());
      }
    }
  }
  template <typename Parse, typename T>
  void read_enum(const std::string& key, T& out, Parse parse) {
    std::string s;
    if (!has(key)) {
      seen_.insert(key);
      return;
    }
    read(key, s);
    try {
      out = parse(s);
    } catch (const ConfigError& e) {
      fail(child(key), e.what());
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(child(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_network(ObjectReader& parent, const std::string& key,
                  NetworkSettings& out) {
  const json* v = parent.find(key);
  if (!v) return;
  ObjectReader r(*v, parent.child(key));
  r.read("hidden", out.hidden);
  r.read_enum("activation", out.activation, parse_activation);
  r.read("leaky_slope", out.leaky_slope);
  r.finish();
}

json network_json(const NetworkSettings& n) {
  return {{"hidden", n.hidden},
          {"activation", activation_name(n.activation)},
          {"leaky_slope", n.leaky_slope}};
}

}  // namespace

ModelConfig RunConfig::model_config() const {
  ModelConfig c;
  c.x_dim = data.dim;
  c.z_dim = model.z_dim;
  c.decoder_only = objective.decoder_only;
  c.encoder = ModelConfig::gaussian_head_spec(c.x_dim, c.z_dim, model.encoder.hidden,
                                              model.encoder.activation);
  c.encoder.leaky_slope = model.encoder.leaky_slope;
  c.decoder = ModelConfig::gaussian_head_spec(c.z_dim, c.x_dim, model.decoder.hidden,
                                              model.decoder.activation);
  c.decoder.leaky_slope = model.decoder.leaky_slope;
  c.discriminator = ModelConfig::critic_spec(
      c.decoder_only ? c.x_dim : c.x_dim + c.z_dim, model.discriminator.hidden,
      model.discriminator.activation);
  c.discriminator.leaky_slope = model.discriminator.leaky_slope;
  c.clamp = {model.log_variance_min, model.log_variance_max};
  return c;
}

void RunConfig::validate() const {
  auto wrap = [](const char* path, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(path) + ": " + e.what());
    }
  };
  wrap("$.objective", [&] { objective.validate(); });
  wrap("$.train", [&] { train.validate(); });
  wrap("$.data", [&] { data.validate(); });
  if (model.z_dim < 1) throw ConfigError("$.model.z_dim: must be >= 1");
  wrap("$.model", [&] { model_config().validate(); });
  if (output_dir.empty()) throw ConfigError("$.output_dir: must be nonempty");
}

void RunConfig::set_variant(Variant variant, double lambda) {
  const bool was_wgan = objective.variant == Variant::kWgan;
  objective = ObjectiveSpec::make(variant, lambda);
  if (variant == Variant::kWgan && !was_wgan) train.disc_steps_per_gen_step = 5;
  if (variant != Variant::kWgan && was_wgan) train.disc_steps_per_gen_step = 1;
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("$: malformed JSON: ") + e.what());
  }
  RunConfig cfg;
  ObjectReader r(root, "$");
  std::string version;
  r.read("format_version", version);
  if (!version.empty() && version != kFormatVersion) {
    ObjectReader::fail("$.format_version",
                       "unsupported version '" + version + "', expected " +
                           kFormatVersion);
  }

  bool disc_steps_given = false;
  if (const json* v = r.find("objective")) {
    ObjectReader o(*v, "$.objective");
    Variant variant = Variant::kSvae;
    o.read_enum("variant", variant, parse_variant);
    double lambda = 0.0;
    o.read("lambda", lambda);
    cfg.objective = ObjectiveSpec::make(variant, lambda);
    o.read_enum("generator_transform", cfg.objective.generator_transform,
                parse_transform);
    o.read("decoder_only", cfg.objective.decoder_only);
    o.finish();
  }
  if (const json* v = r.find("train")) {
    ObjectReader t(*v, "$.train");
    auto& c = cfg.train;
    t.read("learning_rate", c.learning_rate);
    t.read("batch_size", c.batch_size);
    t.read("total_generator_steps", c.total_generator_steps);
    disc_steps_given = t.has("disc_steps_per_gen_step");
    t.read("disc_steps_per_gen_step", c.disc_steps_per_gen_step);
    t.read("adam_beta1", c.adam_beta1);
    t.read("adam_beta2", c.adam_beta2);
    t.read("adam_epsilon", c.adam_epsilon);
    t.read("clip_value", c.clip_value);
    t.read("seed", c.seed);
    t.read("eval_every", c.eval_every);
    t.read("eval_size", c.eval_size);
    t.read("iw_samples", c.iw_samples);
    t.finish();
  }
  if (!disc_steps_given && cfg.objective.variant == Variant::kWgan) {
    cfg.train.disc_steps_per_gen_step = 5;
  }
  if (const json* v = r.find("data")) {
    ObjectReader d(*v, "$.data");
    auto& s = cfg.data;
    d.read("n_components", s.n_components);
    d.read("dim", s.dim);
    d.read("component_std", s.component_std);
    d.read("ring_radius", s.ring_radius);
    d.read("n_samples", s.n_samples);
    d.read("seed", s.seed);
    d.finish();
  }
  if (const json* v = r.find("model")) {
    ObjectReader m(*v, "$.model");
    m.read("z_dim", cfg.model.z_dim);
    read_network(m, "encoder", cfg.model.encoder);
    read_network(m, "decoder", cfg.model.decoder);
    read_network(m, "discriminator", cfg.model.discriminator);
    m.read("log_variance_min", cfg.model.log_variance_min);
    m.read("log_variance_max", cfg.model.log_variance_max);
    m.finish();
  }
  r.read("output_dir", cfg.output_dir);
  r.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const RunConfig& c, int indent) {
  const auto& t = c.train;
  const auto& d = c.data;
  json j = {
      {"format_version", kFormatVersion},
      {"objective",
       {{"variant", variant_name(c.objective.variant)},
        {"lambda", c.objective.lambda},
        {"generator_transform", transform_name(c.objective.generator_transform)},
        {"decoder_only", c.objective.decoder_only}}},
      {"train",
       {{"learning_rate", t.learning_rate},
        {"batch_size", t.batch_size},
        {"total_generator_steps", t.total_generator_steps},
        {"disc_steps_per_gen_step", t.disc_steps_per_gen_step},
        {"adam_beta1", t.adam_beta1},
        {"adam_beta2", t.adam_beta2},
        {"adam_epsilon", t.adam_epsilon},
        {"clip_value", t.clip_value},
        {"seed", t.seed},
        {"eval_every", t.eval_every},
        {"eval_size", t.eval_size},
        {"iw_samples", t.iw_samples}}},
      {"data",
       {{"n_components", d.n_components},
        {"dim", d.dim},
        {"component_std", d.component_std},
        {"ring_radius", d.ring_radius},
        {"n_samples", d.n_samples},
        {"seed", d.seed}}},
      {"model",
       {{"z_dim", c.model.z_dim},
        {"encoder", network_json(c.model.encoder)},
        {"decoder", network_json(c.model.decoder)},
        {"discriminator", network_json(c.model.discriminator)},
        {"log_variance_min", c.model.log_variance_min},
        {"log_variance_max", c.model.log_variance_max}}},
      {"output_dir", c.output_dir},
  };
  return j.dump(indent);
}

}  // namespace svae
