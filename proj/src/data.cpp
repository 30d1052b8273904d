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

#include "svae/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "svae/error.hpp"

namespace svae {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

PointSet PointSet::from_tensor(const Tensor& rows) {
  if (rows.rank() != 2) throw ShapeError("PointSet: expected rank-2 rows");
  PointSet p;
  p.dim = rows.cols();
  p.values.assign(rows.values().begin(), rows.values().end());
  return p;
}

Tensor PointSet::gather(std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * dim);
  for (auto i : indices) {
    const auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return Tensor::matrix(indices.size(), dim, std::move(out));
}

void ToyDatasetSpec::validate() const {
  if (n_components < 1) throw ConfigError("data: n_components must be >= 1");
  if (n_samples < 1) throw ConfigError("data: n_samples must be >= 1");
  if (dim < 2) throw ConfigError("data: dim must be >= 2");
  if (!(component_std > 0.0)) throw ConfigError("data: component_std must be > 0");
  if (!(ring_radius > 0.0)) throw ConfigError("data: ring_radius must be > 0");
}

GmmDensity build_toy_gmm(const ToyDatasetSpec& spec) {
  spec.validate();
  GmmDensity gmm;
  const auto k = spec.n_components;
  for (std::size_t i = 0; i < k; ++i) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
    std::vector<double> mean(spec.dim, 0.0);
    mean[0] = spec.ring_radius * std::cos(angle);
    mean[1] = spec.ring_radius * std::sin(angle);
    gmm.weights.push_back(1.0 / static_cast<double>(k));
    gmm.means.push_back(std::move(mean));
    gmm.variances.emplace_back(spec.dim,
                               spec.component_std * spec.component_std);
  }
  // Equal weights may miss 1 by an ulp; renormalize the last one.
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) head += gmm.weights[i];
  gmm.weights.back() = 1.0 - head;
  gmm.validate();
  return gmm;
}

PointSet sample_dataset(const GmmDensity& gmm, std::size_t n,
                        std::uint64_t seed) {
  gmm.validate();
  if (n < 1) throw ConfigError("sample_dataset: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick(gmm.weights.begin(), gmm.weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  PointSet p;
  p.dim = gmm.dim();
  p.values.reserve(n * p.dim);
  p.components.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = pick(rng);
    for (std::size_t j = 0; j < p.dim; ++j) {
      p.values.push_back(gmm.means[k][j] +
                         std::sqrt(gmm.variances[k][j]) * normal(rng));
    }
    p.components.push_back(k);
  }
  return p;
}

void write_dataset(const PointSet& points, const std::filesystem::path& path) {
  if (points.empty()) throw ConfigError("write_dataset: no points to write");
  const bool labelled = points.components.size() == points.size();
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw ConfigError("write_dataset: cannot open " + tmp.string());
    for (std::size_t j = 0; j < points.dim; ++j) {
      os << (j ? "," : "") << 'x' << j;
    }
    if (labelled) os << ",component";
    os << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto r = points.row(i);
      for (std::size_t j = 0; j < points.dim; ++j) {
        os << (j ? "," : "") << format_double(r[j]);
      }
      if (labelled) os << ',' << points.components[i];
      os << '\n';
    }
    if (!os) throw ConfigError("write_dataset: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

PointSet read_dataset(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("read_dataset: cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line.empty()) {
    throw ConfigError(path.string() + ":1: empty file, expected header x0,x1");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  PointSet p;
  bool labelled = false;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j + 1 == header.size() && header[j] == "component" && j >= 1) {
      labelled = true;
    } else if (header[j] != "x" + std::to_string(j)) {
      throw ConfigError(path.string() +
                        ":1: header mismatch, expected columns x0,x1,... "
                        "with optional trailing component, got '" + line + "'");
    }
  }
  p.dim = header.size() - (labelled ? 1 : 0);
  if (p.dim < 1) {
    throw ConfigError(path.string() + ":1: header mismatch, expected x0,x1");
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < p.dim; ++j) {
      double v = 0.0;
      const auto& c = cells[j];
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size() ||
          !std::isfinite(v)) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                          ": malformed number '" + c + "' in column x" +
                          std::to_string(j));
      }
      p.values.push_back(v);
    }
    if (labelled) {
      int k = 0;
      const auto& c = cells.back();
      const auto res = std::from_chars(c.data(), c.data() + c.size(), k);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                          ": malformed component '" + c + "'");
      }
      p.components.push_back(k);
    }
  }
  if (p.empty()) {
    throw ConfigError(path.string() + ":2: no data rows after the header");
  }
  return p;
}

DataEntropyEstimate estimate_data_log_density(const GmmDensity& gmm,
                                              const PointSet& points) {
  if (points.empty()) throw ConfigError("estimate_data_log_density: no points");
  const auto n = points.size();
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = gmm_log_pdf(gmm, points.row(i));
    sum += lp;
    sq += lp * lp;
  }
  const double mean = sum / static_cast<double>(n);
  const double var =
      n > 1 ? (sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1)
            : 0.0;
  return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

}  // namespace svae
