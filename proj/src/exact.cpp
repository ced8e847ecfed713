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

#include "evcs/exact.hpp"

#include <limits>
#include <string>

#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/parallel.hpp"

namespace evcs {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t q = 1; q <= k; ++q) {
    // r * (n - k + q) / q stays integral at every step.
    const std::uint64_t num = n - k + q;
    if (r > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r * num / q;
  }
  return r;
}

/// Depth-first walk over (period, station) with per-period budget pruning.
class Walker {
 public:
  Walker(const Instance& in, std::function<bool(int t, const OutletSchedule&)> on_period_end,
         std::function<void(const OutletSchedule&)> on_leaf)
      : in_(in),
        schedule_(in.num_stations(), in.horizon),
        on_period_end_(std::move(on_period_end)),
        on_leaf_(std::move(on_leaf)) {}

  void run_from(int t, int j, double spent) { step(t, j, spent); }
  OutletSchedule& schedule() { return schedule_; }

 private:
  int previous(int t, int j) const {
    return t == 0 ? in_.stations[j].initial_outlets : schedule_.at(t - 1, j);
  }

  void step(int t, int j, double spent) {
    const int M = in_.num_stations();
    if (j == M) {
      if (!on_period_end_(t, schedule_)) return;
      if (t + 1 == in_.horizon) {
        on_leaf_(schedule_);
      } else {
        step(t + 1, 0, 0.0);
      }
      return;
    }
    const int from = previous(t, j);
    double cost = spent;
    for (int level = from; level <= in_.stations[j].max_outlets; ++level) {
      if (level > from) {
        cost += in_.costs.cost(j, level, t);
        if (cost > in_.costs.budget(t) + 1e-9) break;
      }
      schedule_.at(t, j) = level;
      step(t, j + 1, cost);
    }
    schedule_.at(t, j) = from;
  }

  const Instance& in_;
  OutletSchedule schedule_;
  std::function<bool(int, const OutletSchedule&)> on_period_end_;
  std::function<void(const OutletSchedule&)> on_leaf_;
};

[[noreturn]] void refuse(const Instance& in, const EnumerationBudget& budget) {
  throw DomainError("enumeration refused: the feasible state space exceeds " +
                    std::to_string(budget.max_configurations) +
                    " configurations (unpruned size " + std::to_string(unpruned_state_space(in)) +
                    ")");
}

void check_budget(const Instance& in, const EnumerationBudget& budget) {
  if (budget.max_configurations == 0) throw ConfigError("enumeration cap must be positive");
  if (unpruned_state_space(in) <= budget.max_configurations) return;
  std::uint64_t seen = 0;
  struct Stop {};
  try {
    Walker w(in, [](int, const OutletSchedule&) { return true; },
             [&](const OutletSchedule&) {
               if (++seen > budget.max_configurations) throw Stop{};
             });
    w.run_from(0, 0, 0.0);
  } catch (const Stop&) {
    refuse(in, budget);
  }
}

}  // namespace

std::uint64_t unpruned_state_space(const Instance& instance) {
  std::uint64_t total = 1;
  const auto T = static_cast<std::uint64_t>(instance.horizon);
  for (const auto& s : instance.stations) {
    const auto free = static_cast<std::uint64_t>(s.max_outlets - s.initial_outlets);
    total = saturating_mul(total, binomial(free + T, T));
  }
  return total;
}

std::uint64_t enumerate_feasible(const Instance& instance, const EnumerationBudget& budget,
                                 const std::function<void(const OutletSchedule&)>& visit) {
  check_budget(instance, budget);
  std::uint64_t count = 0;
  Walker w(instance, [](int, const OutletSchedule&) { return true; },
           [&](const OutletSchedule& s) {
             ++count;
             visit(s);
           });
  w.run_from(0, 0, 0.0);
  return count;
}

std::uint64_t count_feasible(const Instance& instance, const EnumerationBudget& budget) {
  return enumerate_feasible(instance, budget, [](const OutletSchedule&) {});
}

ExactResult brute_force_optimum(const Instance& instance, const CoverageTensor& coverage,
                                const EnumerationBudget& budget, int threads) {
  check_budget(instance, budget);
  const int M = instance.num_stations();
  const int T = instance.horizon;

  // First-period configurations in enumeration order; each seeds one subtree.
  std::vector<OutletSchedule> roots;
  {
    Walker w(instance,
             [&](int t, const OutletSchedule& s) {
               if (t == 0) roots.push_back(s);
               return false;
             },
             [](const OutletSchedule&) {});
    w.run_from(0, 0, 0.0);
  }

  struct Best {
    OutletSchedule schedule;
    double value = -1.0;
    std::uint64_t count = 0;
  };
  std::vector<Best> best(roots.size());
  parallel_for(roots.size(), threads, [&](std::size_t q) {
    Best& b = best[q];
    std::vector<double> acc(T + 1, 0.0);
    std::vector<int> levels(M);
    auto period_end = [&](int t, const OutletSchedule& s) {
      for (int j = 0; j < M; ++j) levels[j] = s.at(t, j);
      acc[t + 1] = acc[t] + period_value(coverage, t, levels);
      return true;
    };
    auto leaf = [&](const OutletSchedule& s) {
      ++b.count;
      if (acc[T] > b.value) {
        b.value = acc[T];
        b.schedule = s;
      }
    };
    Walker w(instance, period_end, leaf);
    w.schedule() = roots[q];
    period_end(0, roots[q]);
    if (T == 1) {
      leaf(roots[q]);
    } else {
      w.run_from(1, 0, 0.0);
    }
  });

  ExactResult out;
  out.value = -1.0;
  for (auto& b : best) {
    out.feasible_count += b.count;
    if (b.value > out.value) {
      out.value = b.value;
      out.schedule = b.schedule;
    }
  }
  return out;
}

}  // namespace evcs
