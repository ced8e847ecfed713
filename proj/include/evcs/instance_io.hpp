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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evcs/instance.hpp"
#include "evcs/solution.hpp"

namespace evcs {

inline constexpr int kInstanceSchemaVersion = 1;

/// Serializes an instance as a versioned JSON document. The error tensor is
/// a flat array; its index order is spelled out in the "layout" field of the
/// "error_tensor" header block. Output is deterministic, so saving a loaded
/// instance reproduces the file byte for byte.
std::string serialize_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::filesystem::path& path);

/// Parses and validates an instance. Throws ParseError (with location) on
/// malformed input or a schema mismatch, ValidationError when an invariant
/// such as beta >= 0 is violated.
Instance parse_instance(const std::string& text, const std::string& origin = "<string>");
Instance load_instance(const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical serialization.
std::uint64_t instance_content_hash(const Instance& instance);

/// Network tables: nodes.csv with header
///   id,x_km,y_km,population,city_center,single,attached,apartment[,inc1..inc5]
/// and edges.csv with header node_a,node_b[,length_km]. Missing lengths are
/// the Euclidean distance between endpoints.
Network read_network_csv(const std::filesystem::path& nodes_csv,
                         const std::filesystem::path& edges_csv);
void write_network_csv(const Network& network, const std::filesystem::path& nodes_csv,
                       const std::filesystem::path& edges_csv);

struct ManifestEntry {
  std::string path;  // relative to the manifest directory
  std::uint64_t seed = 0;
  int index = 0;
};

struct Manifest {
  std::string dataset_kind;
  std::uint64_t base_seed = 0;
  std::vector<ManifestEntry> instances;
};

void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

/// Outlet schedule as JSON: {"schema": "evcs-solution", "outlets": [[t0...], ...]}.
void save_schedule(const OutletSchedule& schedule, const std::filesystem::path& path);
OutletSchedule load_schedule(const std::filesystem::path& path);

/// Replaces `path` atomically (write to a sibling temp file, then rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace evcs
