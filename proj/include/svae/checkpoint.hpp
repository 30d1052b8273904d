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

// Text checkpoints: a versioned header, the resolved run config on one line,
// then each named tensor with its shape and row-major values at full
// precision.

#include <filesystem>

#include "svae/config.hpp"
#include "svae/models.hpp"

namespace svae {

inline constexpr const char* kCheckpointHeader = "svae-checkpoint 1";

struct Checkpoint {
  RunConfig config;
  ModelTriple triple;
};

void write_checkpoint(const std::filesystem::path& path, const RunConfig& config,
                      const ModelTriple& triple);

// Rebuilds the network shapes from the stored config and fills them from the
// stored tensors. Missing, extra or misshapen tensors are rejected.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace svae
