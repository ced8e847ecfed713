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

#include "evcs/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "evcs/error.hpp"

namespace evcs {

Network::Network(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw ValidationError("network: duplicate node id '" + nodes_[i].id + "'");
    }
  }
}

std::size_t Network::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw ValidationError("network: unknown node id '" + id + "'");
  }
  return it->second;
}

double Network::total_population() const {
  double total = 0.0;
  for (const auto& n : nodes_) total += n.population;
  return total;
}

bool Network::operator==(const Network& other) const {
  if (nodes_.size() != other.nodes_.size() || edges_.size() != other.edges_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& a = nodes_[i];
    const Node& b = other.nodes_[i];
    if (a.id != b.id || a.x_km != b.x_km || a.y_km != b.y_km ||
        a.population != b.population || a.city_center != b.city_center ||
        a.housing_mix != b.housing_mix || a.income_mix != b.income_mix) {
      return false;
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& a = edges_[e];
    const Edge& b = other.edges_[e];
    if (a.node_a != b.node_a || a.node_b != b.node_b || a.length_km != b.length_km) {
      return false;
    }
  }
  return true;
}

void Network::validate() const {
  for (const auto& n : nodes_) {
    if (!std::isfinite(n.x_km) || !std::isfinite(n.y_km)) {
      throw ValidationError("network: node '" + n.id + "' has non-finite coordinates");
    }
    if (!(n.population >= 0.0)) {
      throw ValidationError("network: node '" + n.id + "' has negative population");
    }
    double sum = 0.0;
    for (double f : n.housing_mix) {
      if (!(f >= 0.0 && f <= 1.0)) {
        throw ValidationError("network: node '" + n.id +
                              "' housing_mix fraction outside [0,1]");
      }
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("network: node '" + n.id + "' housing_mix does not sum to 1");
    }
    if (n.income_mix) {
      double isum = 0.0;
      for (double f : *n.income_mix) {
        if (!(f >= 0.0 && f <= 1.0)) {
          throw ValidationError("network: node '" + n.id +
                                "' income_mix fraction outside [0,1]");
        }
        isum += f;
      }
      if (std::abs(isum - 1.0) > 1e-9) {
        throw ValidationError("network: node '" + n.id + "' income_mix does not sum to 1");
      }
    }
  }
  for (const auto& e : edges_) {
    if (!contains(e.node_a) || !contains(e.node_b)) {
      throw ValidationError("network: edge " + e.node_a + "-" + e.node_b +
                            " references an unknown node");
    }
    if (!(e.length_km > 0.0) || !std::isfinite(e.length_km)) {
      throw ValidationError("network: edge " + e.node_a + "-" + e.node_b +
                            " must have positive length");
    }
  }
  if (!nodes_.empty()) shortest_path_distances(*this, 0);
}

double euclidean_km(const Node& a, const Node& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

std::vector<double> shortest_path_distances(const Network& network,
                                            std::size_t source) {
  const std::size_t n = network.size();
  if (source >= n) throw DomainError("shortest_path_distances: source out of range");

  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(n);
  for (const auto& e : network.edges()) {
    const std::size_t a = network.index_of(e.node_a);
    const std::size_t b = network.index_of(e.node_b);
    adjacency[a].emplace_back(b, e.length_km);
    adjacency[b].emplace_back(a, e.length_km);
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (auto [v, len] : adjacency[u]) {
      if (d + len < dist[v]) {
        dist[v] = d + len;
        queue.emplace(dist[v], v);
      }
    }
  }

  std::vector<std::string> unreachable;
  for (std::size_t v = 0; v < n; ++v) {
    if (dist[v] == kInf) unreachable.push_back(network.nodes()[v].id);
  }
  if (!unreachable.empty()) {
    std::ostringstream msg;
    msg << "network is disconnected: " << unreachable.size()
        << " node(s) unreachable from '" << network.nodes()[source].id << "' {";
    for (std::size_t k = 0; k < unreachable.size() && k < 10; ++k) {
      msg << (k ? ", " : "") << unreachable[k];
    }
    if (unreachable.size() > 10) msg << ", ...";
    msg << "}";
    throw ValidationError(msg.str());
  }
  return dist;
}

std::unordered_map<std::string, double> shortest_path_distances(
    const Network& network, const std::string& source_id) {
  const auto dist = shortest_path_distances(network, network.index_of(source_id));
  std::unordered_map<std::string, double> out;
  for (std::size_t v = 0; v < dist.size(); ++v) out[network.nodes()[v].id] = dist[v];
  return out;
}

std::vector<std::vector<double>> distance_rows(
    const Network& network, const std::vector<std::size_t>& sources) {
  std::vector<std::vector<double>> rows;
  rows.reserve(sources.size());
  for (std::size_t s : sources) rows.push_back(shortest_path_distances(network, s));
  return rows;
}

}  // namespace evcs
