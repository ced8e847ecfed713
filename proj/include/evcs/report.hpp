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

#include <iosfwd>
#include <string>
#include <vector>

namespace evcs {

/// One method run on one instance.
struct RunRow {
  std::string instance;
  std::string method;
  double value = 0.0;
  double gap = 0.0;  // filled by assign_gaps
  double wall_seconds = 0.0;
  std::string termination;
  bool skipped = false;
  std::string reason;

  bool operator==(const RunRow&) const = default;
};

struct Aggregate {
  std::string method;
  std::string metric;  // gap, value or wall_seconds
  double p5 = 0.0;
  double average = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  std::size_t count_best = 0;
  std::size_t count = 0;

  bool operator==(const Aggregate&) const = default;
};

inline constexpr double kBestTolerance = 1e-9;

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value (at least
/// the first). Throws DomainError on empty input.
double nearest_rank_percentile(std::vector<double> values, double p);

/// Sets every non-skipped row's gap against the best value of its instance
/// over all methods. An instance whose best is not positive gets gap 0.
void assign_gaps(std::vector<RunRow>& rows);

/// Per method (sorted by name) aggregates of gap, value and wall
/// time over non-skipped rows. count_best counts rows within kBestTolerance
/// of their instance best. Throws DomainError when no row is usable.
std::vector<Aggregate> summarize(const std::vector<RunRow>& rows);

/// Header: instance,method,value,gap,wall_seconds,termination,skipped,reason
void write_rows_csv(std::ostream& out, const std::vector<RunRow>& rows);
std::vector<RunRow> read_rows_csv(std::istream& in);

/// Header: method,metric,p5,average,median,p95,count_best,count
void write_summary_csv(std::ostream& out, const std::vector<Aggregate>& aggregates);

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_quote(const std::string& field);

}  // namespace evcs
