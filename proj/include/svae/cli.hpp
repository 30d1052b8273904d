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

// Command-line front end: generate-data, train, sweep, eval, verify, report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "svae/config.hpp"
#include "svae/training.hpp"

namespace svae {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

// One entry of a sweep: the requested label plus the resolved config.
struct SweepEntry {
  std::size_t index = 0;
  std::string label;  // svae-r, ali, svae, gan or wgan
  RunConfig config;
  std::string dir_name;
};

// Cross product labels x lambdas x seeds in that nesting order; run i gets
// seed base_seed + i. "ali" at lambda > 0 means the sVAE-r objective with
// the log-sigmoid generator transform.
std::vector<SweepEntry> plan_sweep(const RunConfig& base,
                                   const std::vector<std::string>& labels,
                                   const std::vector<double>& lambdas,
                                   std::size_t n_seeds, std::uint64_t base_seed);

struct RunOutcome {
  bool ok = false;
  std::string error;
  std::size_t steps_completed = 0;
  std::optional<LogRow> final_row;
};

// Runs one training job and writes config.json, metrics.csv, summary.json
// and checkpoint.txt into `dir`.
RunOutcome execute_run(const RunConfig& config, const PointSet& data,
                       const std::filesystem::path& dir, std::ostream* progress);

}  // namespace svae
