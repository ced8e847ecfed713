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

#include "evcs/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evcs/error.hpp"
#include "json.hpp"

namespace evcs {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kErrorPlaceholder = "\"__evcs_error_values__\"";

constexpr const char* kErrorLayout =
    "for i in user_classes: for t in periods: for r in 0..R_i-1: for j in "
    "choice_sets[i][t].exogenous ++ choice_sets[i][t].stations";
constexpr const char* kAscLayout =
    "for alt in [opt-out, station 0..|M|-1, home]: for i in user_classes: for t in periods";
constexpr const char* kBetaLayout =
    "for j in stations: for i in user_classes: for k in 1..m_j: for t in periods";

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::string alt_name(const Instance& in, AltId alt) {
  if (alt == kOptOutAlt) return "opt-out";
  if (alt == in.home_alt()) return "home";
  throw ValidationError("exogenous alternative must be opt-out or home");
}

[[noreturn]] void schema_error(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

}  // namespace

std::string serialize_instance(const Instance& in) {
  ordered_json doc;
  doc["schema"] = "evcs-instance";
  doc["version"] = kInstanceSchemaVersion;
  doc["metadata"] = {{"dataset_kind", in.metadata.dataset_kind},
                     {"seed", in.metadata.seed},
                     {"instance_index", in.metadata.instance_index}};
  doc["horizon"] = in.horizon;

  ordered_json nodes = ordered_json::array();
  for (const auto& n : in.network.nodes()) {
    ordered_json node = {{"id", n.id},
                         {"x_km", n.x_km},
                         {"y_km", n.y_km},
                         {"population", n.population},
                         {"city_center", n.city_center},
                         {"housing_mix", n.housing_mix}};
    if (n.income_mix) node["income_mix"] = *n.income_mix;
    nodes.push_back(std::move(node));
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : in.network.edges()) {
    edges.push_back({{"node_a", e.node_a}, {"node_b", e.node_b}, {"length_km", e.length_km}});
  }
  doc["network"] = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};

  ordered_json stations = ordered_json::array();
  for (const auto& s : in.stations) {
    stations.push_back({{"id", s.id},
                        {"node_id", s.node_id},
                        {"max_outlets", s.max_outlets},
                        {"initial_outlets", s.initial_outlets},
                        {"level3", s.level3}});
  }
  doc["stations"] = std::move(stations);

  ordered_json classes = ordered_json::array();
  for (const auto& c : in.classes) {
    ordered_json cls = {{"id", c.id},
                        {"home_node", c.home_node},
                        {"population", c.population},
                        {"has_home_charging", c.has_home_charging},
                        {"income_bracket", to_string(c.income)},
                        {"scenario_count", c.scenario_count}};
    cls["consideration_radius_km"] =
        c.consideration_radius_km ? ordered_json(*c.consideration_radius_km) : ordered_json();
    classes.push_back(std::move(cls));
  }
  doc["user_classes"] = std::move(classes);

  doc["cost_budget"] = {
      {"outlet_cost_layout", "per station: for k in 1..m_j: for t in periods"},
      {"outlet_cost", in.costs.raw_costs()},
      {"budget", in.costs.budgets()}};

  doc["utility"] = {{"asc_layout", kAscLayout},
                    {"asc", in.utility.raw_asc()},
                    {"beta_layout", kBetaLayout},
                    {"beta", in.utility.raw_beta()}};

  ordered_json choice = ordered_json::array();
  for (int i = 0; i < in.num_classes(); ++i) {
    ordered_json per_class = ordered_json::array();
    for (int t = 0; t < in.horizon; ++t) {
      const auto& cs = in.choice(i, t);
      ordered_json exo = ordered_json::array();
      for (AltId a : cs.exogenous) exo.push_back(alt_name(in, a));
      per_class.push_back({{"exogenous", std::move(exo)}, {"stations", cs.stations}});
    }
    choice.push_back(std::move(per_class));
  }
  doc["choice_sets"] = std::move(choice);

  doc["error_tensor"] = {{"layout", kErrorLayout},
                         {"count", in.errors.size()},
                         {"values", "__evcs_error_values__"}};

  std::string text = doc.dump(1);
  std::string values = "[";
  values.reserve(in.errors.size() * 20 + 2);
  bool first = true;
  for (double v : in.errors.values()) {
    if (!first) values += ',';
    first = false;
    append_double(values, v);
  }
  values += ']';
  const auto pos = text.find(kErrorPlaceholder);
  text.replace(pos, std::char_traits<char>::length(kErrorPlaceholder), values);
  text += '\n';
  return text;
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_instance(instance));
}

Instance parse_instance(const std::string& text, const std::string& origin) {
  std::vector<double> error_values;
  std::vector<std::string> key_at(8);
  bool capturing = false;

  json::parser_callback_t cb = [&](int depth, json::parse_event_t event, json& parsed) {
    if (event == json::parse_event_t::key && depth < static_cast<int>(key_at.size())) {
      key_at[depth] = parsed.get<std::string>();
    } else if (event == json::parse_event_t::array_start && depth == 2 &&
               key_at[1] == "error_tensor" && key_at[2] == "values") {
      capturing = true;
    } else if (event == json::parse_event_t::array_end && capturing && depth == 2) {
      capturing = false;
    } else if (event == json::parse_event_t::value && capturing && depth == 3) {
      if (!parsed.is_number()) {
        throw ParseError(origin + ": error_tensor.values must contain numbers only");
      }
      error_values.push_back(parsed.get<double>());
      return false;
    }
    return true;
  };

  json doc;
  try {
    doc = json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": malformed instance file: " + e.what());
  }

  try {
    if (!doc.is_object() || doc.value("schema", "") != "evcs-instance") {
      schema_error(origin, "not an evcs-instance document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kInstanceSchemaVersion) {
      schema_error(origin, "schema version " + std::to_string(version) +
                               " is not supported (expected " +
                               std::to_string(kInstanceSchemaVersion) + ")");
    }

    Instance in;
    const auto& meta = doc.at("metadata");
    in.metadata.dataset_kind = meta.at("dataset_kind").get<std::string>();
    in.metadata.seed = meta.at("seed").get<std::uint64_t>();
    in.metadata.instance_index = meta.at("instance_index").get<int>();
    in.horizon = doc.at("horizon").get<int>();
    if (in.horizon < 1) schema_error(origin, "horizon must be >= 1");

    std::vector<Node> nodes;
    for (const auto& n : doc.at("network").at("nodes")) {
      Node node;
      node.id = n.at("id").get<std::string>();
      node.x_km = n.at("x_km").get<double>();
      node.y_km = n.at("y_km").get<double>();
      node.population = n.at("population").get<double>();
      node.city_center = n.at("city_center").get<bool>();
      node.housing_mix = n.at("housing_mix").get<std::array<double, 3>>();
      if (n.contains("income_mix")) node.income_mix = n.at("income_mix").get<std::array<double, 5>>();
      nodes.push_back(std::move(node));
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.at("network").at("edges")) {
      edges.push_back({e.at("node_a").get<std::string>(), e.at("node_b").get<std::string>(),
                       e.at("length_km").get<double>()});
    }
    in.network = Network(std::move(nodes), std::move(edges));

    for (const auto& s : doc.at("stations")) {
      in.stations.push_back({s.at("id").get<std::string>(), s.at("node_id").get<std::string>(),
                             s.at("max_outlets").get<int>(), s.at("initial_outlets").get<int>(),
                             s.at("level3").get<bool>()});
      if (in.stations.back().max_outlets < 1) {
        throw ValidationError("instance invariant violated: station " + in.stations.back().id +
                              ": max_outlets must be positive");
      }
    }
    for (const auto& c : doc.at("user_classes")) {
      UserClass cls;
      cls.id = c.at("id").get<std::string>();
      cls.home_node = c.at("home_node").get<std::string>();
      cls.population = c.at("population").get<std::vector<double>>();
      cls.has_home_charging = c.at("has_home_charging").get<bool>();
      cls.income = income_bracket_from_string(c.at("income_bracket").get<std::string>());
      cls.scenario_count = c.at("scenario_count").get<int>();
      const auto& radius = c.at("consideration_radius_km");
      if (!radius.is_null()) cls.consideration_radius_km = radius.get<double>();
      in.classes.push_back(std::move(cls));
    }

    const auto max_outlets = in.max_outlets();
    const int M = in.num_stations();
    const int N = in.num_classes();
    const int T = in.horizon;

    in.costs = CostBudget(max_outlets, T);
    const auto& cb_doc = doc.at("cost_budget");
    const auto raw_costs = cb_doc.at("outlet_cost").get<std::vector<std::vector<double>>>();
    const auto budgets = cb_doc.at("budget").get<std::vector<double>>();
    if (static_cast<int>(raw_costs.size()) != M || static_cast<int>(budgets.size()) != T) {
      schema_error(origin, "cost_budget dimensions do not match stations/horizon");
    }
    for (int j = 0; j < M; ++j) {
      if (raw_costs[j].size() != static_cast<std::size_t>(max_outlets[j]) * T) {
        schema_error(origin, "outlet_cost row " + std::to_string(j) + " has wrong length");
      }
      for (int k = 1; k <= max_outlets[j]; ++k) {
        for (int t = 0; t < T; ++t) in.costs.cost(j, k, t) = raw_costs[j][(k - 1) * T + t];
      }
    }
    for (int t = 0; t < T; ++t) in.costs.budget(t) = budgets[t];

    in.utility = UtilityParams(M, N, T, max_outlets);
    const auto asc = doc.at("utility").at("asc").get<std::vector<double>>();
    const auto beta = doc.at("utility").at("beta").get<std::vector<double>>();
    if (asc.size() != in.utility.raw_asc().size()) schema_error(origin, "asc has wrong length");
    if (beta.size() != in.utility.raw_beta().size()) schema_error(origin, "beta has wrong length");
    in.utility.raw_asc() = asc;
    in.utility.raw_beta() = beta;

    const auto& choice = doc.at("choice_sets");
    if (static_cast<int>(choice.size()) != N) schema_error(origin, "choice_sets must have |N| rows");
    for (int i = 0; i < N; ++i) {
      if (static_cast<int>(choice[i].size()) != T) {
        schema_error(origin, "choice_sets row " + std::to_string(i) + " must have T entries");
      }
      for (int t = 0; t < T; ++t) {
        ChoiceSet cs;
        for (const auto& name : choice[i][t].at("exogenous")) {
          const auto s = name.get<std::string>();
          if (s == "opt-out") {
            cs.exogenous.push_back(kOptOutAlt);
          } else if (s == "home") {
            cs.exogenous.push_back(in.home_alt());
          } else {
            schema_error(origin, "unknown exogenous alternative '" + s + "'");
          }
        }
        cs.stations = choice[i][t].at("stations").get<std::vector<int>>();
        in.choice_sets.push_back(std::move(cs));
      }
    }

    std::vector<int> counts;
    for (const auto& c : in.classes) counts.push_back(c.scenario_count);
    for (const auto& cs : in.choice_sets) {
      for (int j : cs.stations) {
        if (j < 0 || j >= M) schema_error(origin, "choice set references unknown station");
      }
    }
    for (int c : counts) {
      if (c < 1) throw ValidationError("instance invariant violated: scenario_count must be >= 1");
    }
    in.errors = ErrorTensor(counts, T, in.choice_sets);
    const auto declared = doc.at("error_tensor").at("count").get<std::size_t>();
    if (declared != error_values.size() || error_values.size() != in.errors.size()) {
      schema_error(origin, "error_tensor holds " + std::to_string(error_values.size()) +
                               " values, expected " + std::to_string(in.errors.size()));
    }
    in.errors.values() = std::move(error_values);

    validate_instance(in);
    return in;
  } catch (const json::exception& e) {
    throw ParseError(origin + ": invalid instance document: " + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_file(path), path.string());
}

std::uint64_t instance_content_hash(const Instance& instance) {
  const std::string text = serialize_instance(instance);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": expected a number, got '" + cell + "'");
  }
}

bool parse_flag(const std::string& cell, const std::string& where) {
  if (cell == "1" || cell == "true") return true;
  if (cell == "0" || cell == "false") return false;
  throw ParseError(where + ": expected 0/1 flag, got '" + cell + "'");
}

}  // namespace

Network read_network_csv(const std::filesystem::path& nodes_csv,
                         const std::filesystem::path& edges_csv) {
  std::vector<Node> nodes;
  {
    std::istringstream in(read_file(nodes_csv));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(nodes_csv.string() + ": missing header row");
    const auto header = split_csv(line);
    if (header.size() < 8 || header[0] != "id") {
      throw ParseError(nodes_csv.string() +
                       ": header must start with id,x_km,y_km,population,city_center,"
                       "single,attached,apartment");
    }
    const bool has_income = header.size() >= 13;
    int row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line == "\r") continue;
      const auto cells = split_csv(line);
      const std::string where = nodes_csv.string() + ":" + std::to_string(row);
      if (cells.size() != header.size()) throw ParseError(where + ": wrong number of columns");
      Node n;
      n.id = cells[0];
      n.x_km = parse_number(cells[1], where);
      n.y_km = parse_number(cells[2], where);
      n.population = parse_number(cells[3], where);
      n.city_center = parse_flag(cells[4], where);
      for (int h = 0; h < 3; ++h) n.housing_mix[h] = parse_number(cells[5 + h], where);
      if (has_income) {
        std::array<double, 5> mix{};
        for (int b = 0; b < 5; ++b) mix[b] = parse_number(cells[8 + b], where);
        n.income_mix = mix;
      }
      nodes.push_back(std::move(n));
    }
  }
  std::vector<Edge> edges;
  Network partial(nodes, {});
  {
    std::istringstream in(read_file(edges_csv));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(edges_csv.string() + ": missing header row");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "node_a" || header[1] != "node_b") {
      throw ParseError(edges_csv.string() + ": header must be node_a,node_b[,length_km]");
    }
    int row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line == "\r") continue;
      const auto cells = split_csv(line);
      const std::string where = edges_csv.string() + ":" + std::to_string(row);
      if (cells.size() != header.size()) throw ParseError(where + ": wrong number of columns");
      Edge e{cells[0], cells[1], 0.0};
      if (header.size() >= 3 && !cells[2].empty()) {
        e.length_km = parse_number(cells[2], where);
      } else {
        if (!partial.contains(e.node_a) || !partial.contains(e.node_b)) {
          throw ParseError(where + ": edge references unknown node");
        }
        e.length_km = euclidean_km(nodes[partial.index_of(e.node_a)],
                                   nodes[partial.index_of(e.node_b)]);
      }
      edges.push_back(std::move(e));
    }
  }
  Network net(std::move(nodes), std::move(edges));
  net.validate();
  return net;
}

void write_network_csv(const Network& network, const std::filesystem::path& nodes_csv,
                       const std::filesystem::path& edges_csv) {
  const bool with_income = !network.nodes().empty() &&
                           std::all_of(network.nodes().begin(), network.nodes().end(),
                                       [](const Node& n) { return n.income_mix.has_value(); });
  std::string nodes = "id,x_km,y_km,population,city_center,single,attached,apartment";
  if (with_income) nodes += ",inc1,inc2,inc3,inc4,inc5";
  nodes += '\n';
  auto num = [](double v) {
    std::string s;
    append_double(s, v);
    return s;
  };
  for (const auto& n : network.nodes()) {
    nodes += n.id + ',' + num(n.x_km) + ',' + num(n.y_km) + ',' + num(n.population) + ',' +
             (n.city_center ? "1" : "0");
    for (double f : n.housing_mix) nodes += ',' + num(f);
    if (with_income) {
      for (double f : *n.income_mix) nodes += ',' + num(f);
    }
    nodes += '\n';
  }
  std::string edges = "node_a,node_b,length_km\n";
  for (const auto& e : network.edges()) {
    edges += e.node_a + ',' + e.node_b + ',' + num(e.length_km) + '\n';
  }
  write_file_atomic(nodes_csv, nodes);
  write_file_atomic(edges_csv, edges);
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  ordered_json doc;
  doc["schema"] = "evcs-manifest";
  doc["version"] = 1;
  doc["dataset_kind"] = manifest.dataset_kind;
  doc["base_seed"] = manifest.base_seed;
  ordered_json list = ordered_json::array();
  for (const auto& e : manifest.instances) {
    list.push_back({{"path", e.path}, {"seed", e.seed}, {"index", e.index}});
  }
  doc["instances"] = std::move(list);
  write_file_atomic(path, doc.dump(1) + "\n");
}

Manifest load_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed manifest: " + e.what());
  }
  try {
    if (doc.value("schema", "") != "evcs-manifest") {
      throw ParseError(path.string() + ": not an evcs-manifest document");
    }
    Manifest m;
    m.dataset_kind = doc.at("dataset_kind").get<std::string>();
    m.base_seed = doc.at("base_seed").get<std::uint64_t>();
    for (const auto& e : doc.at("instances")) {
      m.instances.push_back({e.at("path").get<std::string>(), e.at("seed").get<std::uint64_t>(),
                             e.at("index").get<int>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": invalid manifest: " + e.what());
  }
}

void save_schedule(const OutletSchedule& schedule, const std::filesystem::path& path) {
  ordered_json doc;
  doc["schema"] = "evcs-solution";
  doc["num_stations"] = schedule.num_stations();
  doc["horizon"] = schedule.horizon();
  ordered_json rows = ordered_json::array();
  for (int t = 0; t < schedule.horizon(); ++t) {
    std::vector<int> row;
    for (int j = 0; j < schedule.num_stations(); ++j) row.push_back(schedule.at(t, j));
    rows.push_back(row);
  }
  doc["outlets"] = std::move(rows);
  write_file_atomic(path, doc.dump(1) + "\n");
}

OutletSchedule load_schedule(const std::filesystem::path& path) {
  try {
    const json doc = json::parse(read_file(path));
    if (doc.value("schema", "") != "evcs-solution") {
      throw ParseError(path.string() + ": not an evcs-solution document");
    }
    const int M = doc.at("num_stations").get<int>();
    const int T = doc.at("horizon").get<int>();
    OutletSchedule s(M, T);
    const auto rows = doc.at("outlets").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(rows.size()) != T) throw ParseError(path.string() + ": wrong row count");
    for (int t = 0; t < T; ++t) {
      if (static_cast<int>(rows[t].size()) != M) {
        throw ParseError(path.string() + ": wrong column count");
      }
      for (int j = 0; j < M; ++j) s.at(t, j) = rows[t][j];
    }
    return s;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": invalid solution file: " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace evcs
