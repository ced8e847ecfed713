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

#include <filesystem>
#include <string>

#include "evcs/milp_model.hpp"

namespace evcs {

// LP dialect (CPLEX LP subset):
//   \ comment lines
//   Maximize | Minimize
//    obj: <terms> [+ constant]
//   Subject To
//    <name>: <terms> <= | >= | = <rhs>
//   Bounds
//    <lo> <= <var> <= <up>    every variable, lexicographic; infinities as
//    <var> free                -inf / +inf
//   Binaries / Generals
//    <var> ...
//   End
// Coefficients use 12 significant digits; terms within a row follow variable
// name order; rows keep build order; long rows wrap onto indented lines.
std::string write_lp(const MilpModel& model);
void export_lp(const MilpModel& model, const std::filesystem::path& path);

/// Parses the dialect above; throws ParseError with a line number.
MilpModel parse_lp(const std::string& text);

}  // namespace evcs
