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
#include <limits>
#include <utility>

#include "evcs/cover_state.hpp"
#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/heuristics.hpp"

namespace evcs {

FilterDecision grasp_filter(double candidate_f, double incumbent_f, double max_rel_increase) {
  return candidate_f * max_rel_increase <= incumbent_f ? FilterDecision::kFilter : FilterDecision::kKeep;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double now_seconds() {
  return std::chrono::duration<double>(Clock::now().time_since_epoch()).count();
}

struct Move {
  const char* kind;
  int j = -1;
  int level_j = 0;
  int j2 = -1;
  int level_j2 = 0;
};

class Searcher {
 public:
  Searcher(const Instance& in, const CoverageTensor& cov, const OutletSchedule& x)
      : in_(in), cov_(cov), x_(x), state_(cov, x) {}

  const OutletSchedule& schedule() const { return x_; }
  double total() const { return state_.total(); }

  int previous(int t, int j) const {
    return t == 0 ? in_.stations[j].initial_outlets : x_.at(t - 1, j);
  }

  double spend(int t, int j) const {
    double s = 0.0;
    for (int k = previous(t, j) + 1; k <= x_.at(t, j); ++k) s += in_.costs.cost(j, k, t);
    return s;
  }

  bool affordable(int t, int j, int level, double pool) const {
    return level < in_.stations[j].max_outlets && in_.costs.cost(j, level + 1, t) <= pool + 1e-9;
  }

  // All candidate moves of station j in period t, in a fixed order.
  void moves(int t, int j, std::vector<Move>& out) const {
    out.clear();
    const int M = in_.num_stations();
    if (x_.at(t, j) < in_.stations[j].max_outlets) out.push_back({"add", j, x_.at(t, j) + 1});
    const double own = spend(t, j);
    for (int j2 = 0; j2 < M; ++j2) {
      if (j2 == j) continue;
      if (own > 0.0) {
        double pool = own;
        int a = previous(t, j);
        int b = x_.at(t, j2);
        while (affordable(t, j2, b, pool)) pool -= in_.costs.cost(j2, ++b, t);
        if (b > x_.at(t, j2)) {
          while (affordable(t, j, a, pool)) pool -= in_.costs.cost(j, ++a, t);
          out.push_back({"transfer", j, a, j2, b});
        }
      }
      const double pool_total = own + spend(t, j2);
      if (pool_total > 0.0) {
        double pool = pool_total;
        int level[2] = {previous(t, j), previous(t, j2)};
        const int who[2] = {j, j2};
        int turn = 0;
        for (;;) {
          bool added = false;
          for (int s = 0; s < 2 && !added; ++s) {
            const int p = (turn + s) % 2;
            if (affordable(t, who[p], level[p], pool)) {
              pool -= in_.costs.cost(who[p], ++level[p], t);
              turn = 1 - p;
              added = true;
            }
          }
          if (!added) break;
        }
        if (level[0] >= 1 && level[1] >= 1 &&
            (level[0] != x_.at(t, j) || level[1] != x_.at(t, j2))) {
          out.push_back({"split", j, level[0], j2, level[1]});
        }
      }
    }
  }

  // Schedule after the move: raised levels carry forward, lowered levels
  // drop by the same amount in later periods.
  OutletSchedule apply(int t, const Move& m) const {
    OutletSchedule y = x_;
    auto set = [&](int j, int level) {
      const int old = x_.at(t, j);
      for (int u = t; u < x_.horizon(); ++u) {
        y.at(u, j) = level >= old ? std::max(x_.at(u, j), level) : x_.at(u, j) - (old - level);
      }
    };
    set(m.j, m.level_j);
    if (m.j2 >= 0) set(m.j2, m.level_j2);
    return y;
  }

  bool feasible(const OutletSchedule& y, int t) const {
    for (int u = t; u < y.horizon(); ++u) {
      if (schedule_cost(in_, y, u) > in_.costs.budget(u) + 1e-9) return false;
    }
    return true;
  }

  double delta(const OutletSchedule& y, int t, const Move& m) const {
    double d = 0.0;
    for (int u = t; u < y.horizon(); ++u) {
      const double v = m.j2 >= 0 ? state_.period_value_with(u, m.j, y.at(u, m.j), m.j2, y.at(u, m.j2))
                                 : state_.period_value_with(u, m.j, y.at(u, m.j));
      d += v - state_.period_value(u);
    }
    return d;
  }

  void accept(OutletSchedule y) {
    x_ = std::move(y);
    state_.assign(x_);
  }

 private:
  const Instance& in_;
  const CoverageTensor& cov_;
  OutletSchedule x_;
  CoverState state_;
};

}  // namespace

OutletSchedule local_search(const Instance& in, const CoverageTensor& cov, const OutletSchedule& start,
                            const LocalSearchOptions& options, std::vector<TraceEntry>* trace) {
  const auto t0 = Clock::now();
  Searcher s(in, cov, start);
  std::vector<Move> moves;
  auto expired = [&] { return options.deadline_s > 0.0 && now_seconds() >= options.deadline_s; };
  auto record = [&](int t, const Move& m, double d) {
    if (options.on_accept) options.on_accept(s.schedule());
    if (!trace) return;
    trace->push_back({t, m.j, m.level_j, m.kind, d, s.total(), seconds_since(t0)});
  };
  for (int t = 0; t < in.horizon; ++t) {
    for (;;) {
      if (expired()) return s.schedule();
      const double before = s.total();
      const double tol = 1e-9 * std::max(1.0, before);
      if (options.improvement == ImprovementMode::kFirst) {
        for (int j = 0; j < in.num_stations(); ++j) {
          s.moves(t, j, moves);
          for (const auto& m : moves) {
            OutletSchedule y = s.apply(t, m);
            if (!s.feasible(y, t)) continue;
            const double d = s.delta(y, t, m);
            if (d > tol) {
              s.accept(std::move(y));
              record(t, m, d);
              break;
            }
          }
        }
      } else {
        Move best{};
        double best_d = tol;
        OutletSchedule best_y;
        for (int j = 0; j < in.num_stations(); ++j) {
          s.moves(t, j, moves);
          for (const auto& m : moves) {
            OutletSchedule y = s.apply(t, m);
            if (!s.feasible(y, t)) continue;
            const double d = s.delta(y, t, m);
            if (d > best_d) {
              best_d = d;
              best = m;
              best_y = std::move(y);
            }
          }
        }
        if (best.j >= 0) {
          s.accept(std::move(best_y));
          record(t, best, best_d);
        }
      }
      const double after = s.total();
      if (!(after > before)) break;
      if (before > 0.0 && (after - before) / before < options.min_rel_gain) break;
    }
  }
  return s.schedule();
}

HeuristicResult grasp(const Instance& in, const CoverageTensor& cov, const GraspConfig& config) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
  const auto start = Clock::now();
  const double deadline = now_seconds() + config.time_limit_s;
  HeuristicResult result;
  result.seed = config.seed;
  result.schedule = OutletSchedule::initial(in);
  result.value = -std::numeric_limits<double>::infinity();
  double max_rel = 1.0;
  std::uint64_t searches = 0;
  LocalSearchOptions ls{config.improvement, config.min_rel_gain, deadline, {}};
  for (std::uint64_t iter = 0;; ++iter) {
    if (result.examined >= config.max_solutions) {
      result.termination = "max-solutions";
      break;
    }
    if (result.filtered >= config.max_filtered) {
      result.termination = "max-filtered";
      break;
    }
    if (seconds_since(start) >= config.time_limit_s) {
      result.termination = "time-limit";
      break;
    }
    CounterRng rng(config.seed, static_cast<std::uint32_t>(iter), static_cast<std::uint32_t>(iter >> 32));
    const OutletSchedule x = grasp_construct(in, cov, config.alpha, config.mode, rng, config.subtractive_rcl);
    const double fc = evaluate(cov, x).total;
    if (searches >= static_cast<std::uint64_t>(config.filter_warmup) &&
        grasp_filter(fc, result.value, max_rel) == FilterDecision::kFilter) {
      ++result.filtered;
      result.trace.push_back({-1, -1, 0, "filtered", fc, result.value, seconds_since(start)});
      continue;
    }
    const OutletSchedule y = local_search(in, cov, x, ls);
    const double fy = evaluate(cov, y).total;
    ++result.examined;
    ++searches;
    if (fc > 0.0) max_rel = std::max(max_rel, fy / fc);
    const bool improved = fy > result.value;
    if (improved) {
      result.schedule = y;
      result.value = fy;
    }
    result.trace.push_back({-1, -1, 0, improved ? "incumbent" : "searched", fc, fy, seconds_since(start)});
  }
  if (result.examined == 0) result.value = evaluate(cov, result.schedule).total;
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace evcs
