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

// Toy Gaussian-mixture data: generation, CSV persistence and ground-truth
// density access.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "svae/distributions.hpp"
#include "svae/tensor.hpp"

namespace svae {

// Row-major points. `components` records the mixture component of each
// generated point (metrics only) and is empty when unknown.
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<int> components;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  bool empty() const { return size() == 0; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
  Tensor to_tensor() const { return Tensor::matrix(size(), dim, values); }
  static PointSet from_tensor(const Tensor& rows);
  // Rows at the given indices, as a tensor.
  Tensor gather(std::span<const std::size_t> indices) const;
};

struct ToyDatasetSpec {
  std::size_t n_components = 5;
  std::size_t dim = 2;
  double component_std = 0.1;
  double ring_radius = 2.0;
  std::size_t n_samples = 10000;
  std::uint64_t seed = 0;

  void validate() const;
};

// Equal weights, means equally spaced on a circle of radius ring_radius in
// the first two coordinates, isotropic variance component_std^2.
GmmDensity build_toy_gmm(const ToyDatasetSpec& spec);

PointSet sample_dataset(const GmmDensity& gmm, std::size_t n,
                        std::uint64_t seed);

// CSV with header x0,x1,...[,component]; values in shortest round-trip form.
// The write goes to a temporary file that is renamed into place.
void write_dataset(const PointSet& points, const std::filesystem::path& path);
PointSet read_dataset(const std::filesystem::path& path);

// Monte Carlo estimate of E_q log q(x) with its standard error.
struct DataEntropyEstimate {
  double mean_log_density = 0.0;
  double standard_error = 0.0;
};
DataEntropyEstimate estimate_data_log_density(const GmmDensity& gmm,
                                              const PointSet& points);

}  // namespace svae
