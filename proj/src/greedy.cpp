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

#include <algorithm>
#include <chrono>
#include <ostream>

#include "evcs/cover_state.hpp"
#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/heuristics.hpp"

namespace evcs {

std::string to_string(ScoreMode mode) {
  return mode == ScoreMode::kMyopic ? "myopic" : "hyperoptic";
}

ScoreMode parse_score_mode(const std::string& text) {
  if (text == "myopic" || text == "m") return ScoreMode::kMyopic;
  if (text == "hyperoptic" || text == "h") return ScoreMode::kHyperoptic;
  throw ConfigError("unknown score mode '" + text + "' (expected myopic or hyperoptic)");
}

Allocation parse_allocation(const std::string& text) {
  if (text == "even") return Allocation::kEven;
  if (text == "geometric" || text == "geom") return Allocation::kGeometric;
  throw ConfigError("unknown time allocation '" + text + "' (expected even or geometric)");
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "period,station,outlets,move,score,value,elapsed_s\n";
  const auto old = out.precision(17);
  for (const auto& e : trace) {
    out << (e.period >= 0 ? e.period + 1 : 0) << ',' << e.station << ',' << e.outlets << ','
        << e.move << ',' << e.score << ',' << e.value << ',' << e.elapsed_s << '\n';
  }
  out.precision(old);
}

OutletSchedule construct_schedule(const Instance& in, const CoverageTensor& cov, ScoreMode mode,
                                  const CandidateChooser& choose, std::vector<TraceEntry>* trace) {
  const auto start = std::chrono::steady_clock::now();
  const int T = in.horizon;
  const int M = in.num_stations();
  OutletSchedule x = OutletSchedule::initial(in);
  CoverState state(cov, x);
  std::vector<Candidate> cands;
  for (int t = 0; t < T; ++t) {
    double spent = schedule_cost(in, x, t);
    for (;;) {
      cands.clear();
      for (int j = 0; j < M; ++j) {
        const int level = x.at(t, j);
        if (level >= in.stations[j].max_outlets) continue;
        const double c = in.costs.cost(j, level + 1, t);
        if (spent + c > in.costs.budget(t) + 1e-9) continue;
        double score = state.period_value_with(t, j, level + 1) - state.period_value(t);
        if (mode == ScoreMode::kHyperoptic) {
          for (int u = t + 1; u < T; ++u) {
            if (x.at(u, j) >= level + 1) break;
            score += state.period_value_with(u, j, level + 1) - state.period_value(u);
          }
        }
        if (score > 0.0) cands.push_back({j, level + 1, score});
      }
      if (cands.empty()) break;
      const Candidate pick = cands[choose(cands)];
      for (int u = t; u < T; ++u) x.at(u, pick.station) = std::max(x.at(u, pick.station), pick.outlets);
      spent += in.costs.cost(pick.station, pick.outlets, t);
      state.assign(x);
      if (trace) {
        trace->push_back({t, pick.station, pick.outlets, "add", pick.score, state.total(),
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
      }
    }
  }
  return x;
}

namespace {

std::size_t first_best(const std::vector<Candidate>& cands) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < cands.size(); ++c) {
    if (cands[c].score > cands[best].score) best = c;
  }
  return best;
}

}  // namespace

HeuristicResult greedy(const Instance& in, const CoverageTensor& cov, const GreedyConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  HeuristicResult result;
  result.schedule = construct_schedule(in, cov, config.mode, first_best, &result.trace);
  result.value = evaluate(cov, result.schedule).total;
  result.termination = "complete";
  result.examined = 1;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

OutletSchedule grasp_construct(const Instance& in, const CoverageTensor& cov, double alpha,
                               ScoreMode mode, CounterRng& rng, bool subtractive_rcl) {
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be in [0, 1]");
  std::vector<std::size_t> rcl;
  auto choose = [&](const std::vector<Candidate>& cands) -> std::size_t {
    const std::size_t best = first_best(cands);
    if (!subtractive_rcl && alpha >= 1.0) return best;
    const double top = cands[best].score;
    double threshold = alpha * top;
    if (subtractive_rcl) {
      double worst = top;
      for (const auto& c : cands) worst = std::min(worst, c.score);
      threshold = top - alpha * (top - worst);
    }
    rcl.clear();
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (cands[c].score >= threshold) rcl.push_back(c);
    }
    return rcl[rng.below(rcl.size())];
  };
  return construct_schedule(in, cov, mode, choose);
}

}  // namespace evcs
