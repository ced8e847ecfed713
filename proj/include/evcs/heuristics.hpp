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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "evcs/coverage.hpp"
#include "evcs/exact.hpp"
#include "evcs/external_solver.hpp"
#include "evcs/instance.hpp"
#include "evcs/philox.hpp"
#include "evcs/solution.hpp"

namespace evcs {

enum class ScoreMode { kMyopic, kHyperoptic };
enum class ImprovementMode { kFirst, kBest };
enum class Allocation { kEven, kGeometric };

std::string to_string(ScoreMode mode);
ScoreMode parse_score_mode(const std::string& text);
Allocation parse_allocation(const std::string& text);

/// One accepted step: a construction add, a local-search move, a GRASP
/// incumbent update or a rolling-horizon period.
struct TraceEntry {
  int period = -1;  // 0-based, -1 when not tied to a period
  int station = -1;
  int outlets = 0;  // level reached at the station
  std::string move;
  double score = 0.0;
  double value = 0.0;  // f after the step
  double elapsed_s = 0.0;
};

struct HeuristicResult {
  OutletSchedule schedule;
  double value = 0.0;
  double wall_seconds = 0.0;
  std::vector<TraceEntry> trace;
  std::uint64_t seed = 0;
  std::string termination;
  std::uint64_t examined = 0;
  std::uint64_t filtered = 0;
  std::vector<double> period_limits;
};

/// CSV with header period,station,outlets,move,score,value,elapsed_s.
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

struct GreedyConfig {
  ScoreMode mode = ScoreMode::kMyopic;
};

/// Single-outlet add considered during construction.
struct Candidate {
  int station = 0;
  int outlets = 0;
  double score = 0.0;  // marginal gain in f_m or f_h
};

/// Picks one of the candidates (all with positive score, ordered by station).
using CandidateChooser = std::function<std::size_t(const std::vector<Candidate>&)>;

/// Construction loop shared by greedy and GRASP: from the initial schedule,
/// period by period, add one outlet at a time until no budget-feasible add
/// has a positive score. Appends one "add" entry per step when trace is set.
OutletSchedule construct_schedule(const Instance& instance, const CoverageTensor& coverage,
                                  ScoreMode mode, const CandidateChooser& choose,
                                  std::vector<TraceEntry>* trace = nullptr);

HeuristicResult greedy(const Instance& instance, const CoverageTensor& coverage,
                       const GreedyConfig& config = {});

struct GraspConfig {
  double alpha = 0.85;
  ScoreMode mode = ScoreMode::kMyopic;
  bool subtractive_rcl = false;
  std::uint64_t max_solutions = 300;
  std::uint64_t max_filtered = 500;
  double time_limit_s = 7200.0;
  ImprovementMode improvement = ImprovementMode::kFirst;
  int filter_warmup = 10;
  double min_rel_gain = 1e-4;
  std::uint64_t seed = 1;
};

/// Randomized construction. The value-based RCL keeps adds with score >=
/// alpha * best, so alpha >= 1 gives the greedy choice; the subtractive RCL
/// keeps score >= best - alpha * (best - worst).
OutletSchedule grasp_construct(const Instance& instance, const CoverageTensor& coverage,
                               double alpha, ScoreMode mode, CounterRng& rng,
                               bool subtractive_rcl = false);

enum class FilterDecision { kKeep, kFilter };

FilterDecision grasp_filter(double candidate_f, double incumbent_f, double max_rel_increase);

struct LocalSearchOptions {
  ImprovementMode improvement = ImprovementMode::kFirst;
  double min_rel_gain = 1e-4;
  double deadline_s = 0.0;  // seconds on the steady clock; 0 for none
  std::function<void(const OutletSchedule&)> on_accept;  // called after each accepted move
};

/// Add/Transfer/Split local search. Appends one entry per accepted move.
OutletSchedule local_search(const Instance& instance, const CoverageTensor& coverage,
                            const OutletSchedule& start, const LocalSearchOptions& options,
                            std::vector<TraceEntry>* trace = nullptr);

HeuristicResult grasp(const Instance& instance, const CoverageTensor& coverage,
                      const GraspConfig& config = {});

struct RollingHorizonConfig {
  Allocation allocation = Allocation::kEven;
  double total_time_limit_s = 7200.0;
  double geometric_first_s = 3600.0;
  EnumerationBudget fallback_budget{};
};

/// Per-period time limits (even: total/T; geometric: f * 2^(1-t) capped by
/// what is left of the total, with f = min(geometric_first_s, total / 2)).
std::vector<double> period_time_limits(const RollingHorizonConfig& config, int horizon);

/// Solves one period at a time with earlier periods fixed. Uses the external
/// solver when configured, otherwise enumerates the period's configurations.
HeuristicResult rolling_horizon(const Instance& instance, const CoverageTensor& coverage,
                                const RollingHorizonConfig& config, const ExternalSolver& solver);

}  // namespace evcs
