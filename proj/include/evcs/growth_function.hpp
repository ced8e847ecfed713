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

struct GrowthSegment {
  double q_lo = 0.0;
  double q_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;

  bool operator==(const GrowthSegment&) const = default;
};

/// Piecewise-linear map from the EV share at the start of a year to the
/// share at its end. Segments tile [0, 1] in order.
class GrowthFunction {
 public:
  GrowthFunction() = default;
  /// Throws DomainError unless the segments tile [0, 1], join continuously
  /// (1e-9) and are nondecreasing.
  explicit GrowthFunction(std::vector<GrowthSegment> segments);

  /// g(z) = z on [0, 1].
  static GrowthFunction identity();

  const std::vector<GrowthSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

  /// Value at z in [0, 1]; a breakpoint belongs to the segment ending there.
  double operator()(double z) const;

  bool operator==(const GrowthFunction&) const = default;

 private:
  std::vector<GrowthSegment> segments_;
};

/// Builds g from the average covered EVs per year (new EVs each year, no
/// EVs at the start) and the population used for normalization. With
/// cumulative shares e_1..e_T the data points are g(0) = e_1 and
/// g(e_{t-1}) = e_t; the last slope is extended one more segment (capped at
/// 1) and a final segment reaches (1, 1). Zero coverage gives the identity.
GrowthFunction generate_growth_function(const std::vector<double>& yearly_new_evs, double population);

/// Element-wise mean of per-instance yearly values.
std::vector<double> average_yearly(const std::vector<std::vector<double>>& per_instance);

/// CSV with header q_lo,q_hi,slope,intercept.
void write_growth_function(std::ostream& out, const GrowthFunction& g);
GrowthFunction read_growth_function(std::istream& in);

}  // namespace evcs
