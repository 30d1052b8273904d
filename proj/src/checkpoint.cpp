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

#include "svae/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "svae/error.hpp"

namespace svae {
namespace {

struct Section {
  const char* prefix;
  ParameterSet ModelTriple::*member;
};

constexpr Section kSections[] = {
    {"encoder", &ModelTriple::encoder},
    {"decoder", &ModelTriple::decoder},
    {"discriminator", &ModelTriple::discriminator},
};

[[noreturn]] void bad(const std::filesystem::path& path, std::size_t line,
                      const std::string& what) {
  throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const RunConfig& config,
                      const ModelTriple& triple) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw ConfigError("cannot write checkpoint " + tmp.string());
    os << kCheckpointHeader << '\n';
    os << "config " << config_to_json(config, -1) << '\n';
    char buf[64];
    for (const auto& s : kSections) {
      const ParameterSet& ps = triple.*(s.member);
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const Tensor& t = ps.tensors[i];
        os << "tensor " << s.prefix << '/' << ps.names[i] << ' ' << t.rank();
        for (auto d : t.shape()) os << ' ' << d;
        os << '\n';
        for (std::size_t j = 0; j < t.size(); ++j) {
          const auto res = std::to_chars(buf, buf + sizeof(buf), t[j]);
          os << (j ? " " : "") << std::string_view(buf, res.ptr - buf);
        }
        os << '\n';
      }
    }
    os << "end\n";
    if (!os) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open checkpoint " + path.string());
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line) || line != kCheckpointHeader) {
    bad(path, 1, std::string("expected header '") + kCheckpointHeader + "'");
  }
  ++lineno;
  if (!std::getline(is, line) || line.rfind("config ", 0) != 0) {
    bad(path, lineno, "expected the config line");
  }
  Checkpoint ck;
  try {
    ck.config = parse_config(std::string_view(line).substr(7));
  } catch (const ConfigError& e) {
    bad(path, lineno, e.what());
  }

  std::map<std::string, Tensor> tensors;
  bool ended = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line == "end") {
      ended = true;
      break;
    }
    std::istringstream head(line);
    std::string tag, name;
    std::size_t rank = 0;
    if (!(head >> tag >> name >> rank) || tag != "tensor") {
      bad(path, lineno, "expected 'tensor <name> <rank> <dims...>'");
    }
    Shape shape(rank);
    for (auto& d : shape) {
      if (!(head >> d)) bad(path, lineno, "missing dimension for " + name);
    }
    if (!std::getline(is, line)) bad(path, lineno + 1, "missing values for " + name);
    ++lineno;
    std::vector<double> values;
    values.reserve(shape_size(shape));
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) bad(path, lineno, "malformed value in " + name);
      values.push_back(v);
      p = res.ptr;
    }
    if (values.size() != shape_size(shape)) {
      bad(path, lineno, name + " has " + std::to_string(values.size()) +
                            " values, expected " + std::to_string(shape_size(shape)));
    }
    if (!tensors.emplace(name, Tensor(shape, std::move(values))).second) {
      bad(path, lineno, "duplicate tensor " + name);
    }
  }
  if (!ended) bad(path, lineno, "missing 'end' marker (truncated file?)");

  ck.triple = ModelTriple::initialize(ck.config.model_config(), 0);
  for (const auto& s : kSections) {
    ParameterSet& ps = ck.triple.*(s.member);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string key = std::string(s.prefix) + "/" + ps.names[i];
      const auto it = tensors.find(key);
      if (it == tensors.end()) {
        throw ConfigError(path.string() + ": missing tensor " + key);
      }
      if (it->second.shape() != ps.tensors[i].shape()) {
        throw ConfigError(path.string() + ": tensor " + key + " has shape " +
                          shape_string(it->second.shape()) + ", expected " +
                          shape_string(ps.tensors[i].shape()));
      }
      ps.tensors[i] = std::move(it->second);
      tensors.erase(it);
    }
  }
  if (!tensors.empty()) {
    throw ConfigError(path.string() + ": unexpected tensor " + tensors.begin()->first);
  }
  return ck;
}

}  // namespace svae
