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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace evcs {

struct Node {
  std::string id;
  double x_km = 0.0;
  double y_km = 0.0;
  double population = 0.0;
  bool city_center = false;
  // Fractions of residents living in single, attached and apartment housing.
  std::array<double, 3> housing_mix{1.0, 0.0, 0.0};
  // Optional fractions over the five income brackets (lowest first).
  std::optional<std::array<double, 5>> income_mix;
};

struct Edge {
  std::string node_a;
  std::string node_b;
  double length_km = 0.0;
};

/// Undirected road network over zone centroids.
class Network {
 public:
  Network() = default;
  Network(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }

  /// Index of the node with the given id; throws ValidationError if absent.
  std::size_t index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) > 0; }

  double total_population() const;

  /// Checks id uniqueness, edge endpoints, positive lengths, housing mixes and
  /// connectivity. Throws ValidationError describing the first violation.
  void validate() const;

  bool operator==(const Network& other) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
};

double euclidean_km(const Node& a, const Node& b);

/// Single-source shortest path lengths (Dijkstra) indexed like
/// network.nodes(). Throws ValidationError naming the unreachable nodes when
/// the graph is disconnected.
std::vector<double> shortest_path_distances(const Network& network,
                                            std::size_t source);

/// Convenience overload keyed by node id.
std::unordered_map<std::string, double> shortest_path_distances(
    const Network& network, const std::string& source_id);

/// All-pairs distances from each node in `sources` (row per source).
std::vector<std::vector<double>> distance_rows(
    const Network& network, const std::vector<std::size_t>& sources);

}  // namespace evcs
