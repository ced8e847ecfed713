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

#include <string>
#include <vector>

#include "evcs/bounds.hpp"
#include "evcs/coverage.hpp"
#include "evcs/instance.hpp"
#include "evcs/milp_model.hpp"
#include "evcs/solution.hpp"

namespace evcs {

// Variable names (stations and classes 0-based, outlets and periods 1-based):
//   x_<j>_<k>_<t>            at least k outlets at station j in period t
//   w_<t>_<i>_<r>            MC: triplet covered
//   u_<t>_<i>_<r>_<a>        SL: utility of alternative a (o, h or s<j>)
//   w_<t>_<i>_<r>_<a>        SL: alternative a selected
//   alpha_<t>_<i>_<r>        SL: best utility of the triplet
std::string x_name(int j, int k, int t);

struct SlOptions {
  // Lower-level selection variables continuous in [0, 1].
  bool relax_w = false;
};

/// Single-level model. Triplets covered by home charging are left out, so
/// the optimum plus their mass equals the total mass minus the MC optimum.
/// Throws ValidationError when the bounds are unsound.
MilpModel build_sl(const Instance& instance, const BigMBounds& bounds, const SlOptions& options = {});

/// Maximum covering model; forced coverage enters as an objective constant.
MilpModel build_mc(const Instance& instance, const CoverageTensor& coverage);

/// MC restricted to period t with the period-(t-1) levels fixed.
MilpModel build_mc_period(const Instance& instance, const CoverageTensor& coverage, int t,
                          const std::vector<int>& previous_levels);

/// Reads x_<j>_<k>_<t> values (rounded) back into a schedule. Periods absent
/// from `values` are left at zero.
OutletSchedule schedule_from_values(const Instance& instance,
                                    const std::vector<std::pair<std::string, double>>& values);

}  // namespace evcs
