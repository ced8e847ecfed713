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

#include "evcs/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"

namespace evcs {

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) throw DomainError("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

namespace {

std::map<std::string, double> best_by_instance(const std::vector<RunRow>& rows) {
  std::map<std::string, double> best;
  for (const auto& r : rows) {
    if (r.skipped) continue;
    auto [it, inserted] = best.emplace(r.instance, r.value);
    if (!inserted) it->second = std::max(it->second, r.value);
  }
  return best;
}

// Summed in sorted order so the result does not depend on row order.
double mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& s, int line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("run CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void assign_gaps(std::vector<RunRow>& rows) {
  const auto best = best_by_instance(rows);
  for (auto& r : rows) {
    if (r.skipped) continue;
    const double b = best.at(r.instance);
    r.gap = b > 0.0 ? gap(b, r.value) : 0.0;
  }
}

std::vector<Aggregate> summarize(const std::vector<RunRow>& rows) {
  const auto best = best_by_instance(rows);
  if (best.empty()) throw DomainError("no completed runs to summarize");
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    if (!r.skipped && std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  std::sort(methods.begin(), methods.end());
  std::vector<Aggregate> out;
  for (const auto& m : methods) {
    std::vector<double> gaps, values, times;
    std::size_t count_best = 0;
    for (const auto& r : rows) {
      if (r.skipped || r.method != m) continue;
      const double b = best.at(r.instance);
      gaps.push_back(b > 0.0 ? gap(b, r.value) : 0.0);
      values.push_back(r.value);
      times.push_back(r.wall_seconds);
      if (std::abs(r.value - b) <= kBestTolerance) ++count_best;
    }
    auto add = [&](const char* metric, const std::vector<double>& v) {
      out.push_back({m, metric, nearest_rank_percentile(v, 5.0), mean(v), nearest_rank_percentile(v, 50.0),
                     nearest_rank_percentile(v, 95.0), count_best, v.size()});
    };
    add("gap", gaps);
    add("value", values);
    add("wall_seconds", times);
  }
  return out;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t p = 0; p < line.size(); ++p) {
    const char c = line[p];
    if (quoted) {
      if (c == '"' && p + 1 < line.size() && line[p + 1] == '"') {
        fields.back() += '"';
        ++p;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

void write_rows_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  out << "instance,method,value,gap,wall_seconds,termination,skipped,reason\n";
  for (const auto& r : rows) {
    out << csv_quote(r.instance) << ',' << csv_quote(r.method) << ',' << fmt(r.value) << ',' << fmt(r.gap)
        << ',' << fmt(r.wall_seconds) << ',' << csv_quote(r.termination) << ',' << (r.skipped ? 1 : 0) << ','
        << csv_quote(r.reason) << '\n';
  }
}

std::vector<RunRow> read_rows_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("instance,method,value", 0) != 0) {
    throw ParseError("run CSV must start with the instance,method,value,... header");
  }
  std::vector<RunRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw ParseError("run CSV line " + std::to_string(line_no) + ": expected 8 fields");
    RunRow r;
    r.instance = f[0];
    r.method = f[1];
    r.value = to_double(f[2], line_no);
    r.gap = to_double(f[3], line_no);
    r.wall_seconds = to_double(f[4], line_no);
    r.termination = f[5];
    r.skipped = f[6] == "1";
    r.reason = f[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<Aggregate>& aggregates) {
  out << "method,metric,p5,average,median,p95,count_best,count\n";
  for (const auto& a : aggregates) {
    out << csv_quote(a.method) << ',' << a.metric << ',' << fmt(a.p5) << ',' << fmt(a.average) << ','
        << fmt(a.median) << ',' << fmt(a.p95) << ',' << a.count_best << ',' << a.count << '\n';
  }
}

}  // namespace evcs
