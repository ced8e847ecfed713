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

#include "evcs/growth_function.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "evcs/error.hpp"

namespace evcs {

namespace {

constexpr double kTol = 1e-9;

double at(const GrowthSegment& s, double z) { return s.intercept + s.slope * z; }

GrowthSegment through(double q0, double g0, double q1, double g1) {
  const double slope = (g1 - g0) / (q1 - q0);
  return {q0, q1, slope, g0 - slope * q0};
}

}  // namespace

GrowthFunction::GrowthFunction(std::vector<GrowthSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw DomainError("growth function has no segments");
  if (segments_.front().q_lo != 0.0 || std::abs(segments_.back().q_hi - 1.0) > kTol) {
    throw DomainError("growth function segments must cover [0, 1]");
  }
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const auto& seg = segments_[s];
    if (!std::isfinite(seg.slope) || !std::isfinite(seg.intercept) || !(seg.q_hi > seg.q_lo)) {
      throw DomainError("growth function segment " + std::to_string(s + 1) + " is degenerate");
    }
    if (seg.slope < 0.0) {
      throw DomainError("growth function segment " + std::to_string(s + 1) + " is decreasing");
    }
    if (s > 0) {
      const auto& prev = segments_[s - 1];
      if (std::abs(prev.q_hi - seg.q_lo) > kTol) {
        throw DomainError("growth function segments " + std::to_string(s) + " and " +
                          std::to_string(s + 1) + " leave a gap or overlap");
      }
      if (std::abs(at(prev, prev.q_hi) - at(seg, seg.q_lo)) > kTol) {
        throw DomainError("growth function is discontinuous at " + std::to_string(seg.q_lo));
      }
    }
  }
}

GrowthFunction GrowthFunction::identity() { return GrowthFunction({{0.0, 1.0, 1.0, 0.0}}); }

double GrowthFunction::operator()(double z) const {
  for (const auto& s : segments_) {
    if (z <= s.q_hi) return at(s, z);
  }
  return at(segments_.back(), z);
}

GrowthFunction generate_growth_function(const std::vector<double>& yearly_new_evs, double population) {
  if (!(population > 0.0)) throw DomainError("population must be positive");
  if (yearly_new_evs.empty()) throw DomainError("no yearly EV counts");
  std::vector<double> e;
  double cumulative = 0.0;
  for (double c : yearly_new_evs) {
    if (c < 0.0) throw DomainError("yearly EV counts must be nonnegative");
    cumulative += c;
    e.push_back(cumulative / population);
  }
  if (e.back() == 0.0) return GrowthFunction::identity();
  if (e.back() > 1.0) throw DomainError("cumulative EVs exceed the population");

  // Points (q, g(q)) in increasing q.
  std::vector<std::pair<double, double>> pts{{0.0, e[0]}};
  for (std::size_t t = 1; t < e.size(); ++t) pts.emplace_back(e[t - 1], e[t]);
  for (std::size_t p = 1; p < pts.size(); ++p) {
    if (!(pts[p].first > pts[p - 1].first)) {
      throw DomainError("averaged EV shares are not strictly increasing (year " + std::to_string(p) +
                        " adds no EVs)");
    }
  }
  // Extend the last data slope up to q = e_T.
  if (pts.size() >= 2 && e.back() < 1.0 && e.back() > pts.back().first) {
    const auto [qa, ga] = pts[pts.size() - 2];
    const auto [qb, gb] = pts.back();
    const double q_ext = e.back();
    const double g_ext = gb + (gb - ga) / (qb - qa) * (q_ext - qb);
    pts.emplace_back(q_ext, std::min(1.0, std::max(g_ext, q_ext)));
  }
  std::vector<GrowthSegment> segs;
  for (std::size_t p = 1; p < pts.size(); ++p) {
    segs.push_back(through(pts[p - 1].first, pts[p - 1].second, pts[p].first, pts[p].second));
  }
  if (pts.back().first < 1.0) segs.push_back(through(pts.back().first, pts.back().second, 1.0, 1.0));
  return GrowthFunction(std::move(segs));
}

std::vector<double> average_yearly(const std::vector<std::vector<double>>& per_instance) {
  if (per_instance.empty()) throw DomainError("no instances to average");
  std::vector<double> mean(per_instance.front().size(), 0.0);
  for (const auto& row : per_instance) {
    if (row.size() != mean.size()) throw DomainError("instances have different horizons");
    for (std::size_t t = 0; t < row.size(); ++t) mean[t] += row[t];
  }
  for (double& v : mean) v /= static_cast<double>(per_instance.size());
  return mean;
}

void write_growth_function(std::ostream& out, const GrowthFunction& g) {
  out << "q_lo,q_hi,slope,intercept\n";
  const auto old = out.precision(17);
  for (const auto& s : g.segments()) out << s.q_lo << ',' << s.q_hi << ',' << s.slope << ',' << s.intercept << '\n';
  out.precision(old);
}

GrowthFunction read_growth_function(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("q_lo", 0) != 0) {
    throw ParseError("growth function file must start with the q_lo,q_hi,slope,intercept header");
  }
  std::vector<GrowthSegment> segs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    GrowthSegment s;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> s.q_lo >> c1 >> s.q_hi >> c2 >> s.slope >> c3 >> s.intercept) || c1 != ',' || c2 != ',' ||
        c3 != ',') {
      throw ParseError("growth function line " + std::to_string(line_no) + ": expected four numbers");
    }
    segs.push_back(s);
  }
  return GrowthFunction(std::move(segs));
}

}  // namespace evcs
