// Copyright 2026 The evcs Authors
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

#include <filesystem>
#include <optional>

#include "evcs/coverage.hpp"
#include "evcs/instance.hpp"

namespace evcs {

// Cache layout (little endian):
//   8 bytes  magic "EVCSCOV1"
//   u32      layout version (1)
//   u64      instance content hash
//   u32 T, u32 |M|, u32 |N|
//   u32 m_j for every station, u32 R_i for every class
//   u8       min_k for t, j, i, r (0xFF: never covers)
//   u8       forced flag for t, i, r
void save_coverage_cache(const Instance& instance, const CoverageTensor& coverage,
                         const std::filesystem::path& path);

/// The cached tensor, or nullopt when the file is missing, malformed or was
/// written for different instance contents.
std::optional<CoverageTensor> load_coverage_cache(const Instance& instance,
                                                  const std::filesystem::path& path);

/// Loads the cache when valid, otherwise builds the tensor and rewrites it.
CoverageTensor cached_coverage(const Instance& instance, const std::filesystem::path& path,
                               int threads = 1);

}  // namespace evcs
