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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evcs/milp_model.hpp"

namespace evcs {

enum class SolveStatus { kOptimal, kFeasibleTimeout, kInfeasible, kError, kNotConfigured };

std::string to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kError;
  double objective = 0.0;
  std::vector<std::pair<std::string, double>> values;
  double wall_seconds = 0.0;
  std::string message;

  bool has_solution() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kFeasibleTimeout;
  }
  std::optional<double> value(const std::string& name) const;
};

/// Parses a solution file in either supported style:
///  * name/value: an optional status line ("Optimal - objective value 12",
///    "status optimal", "Stopped on time ..."), an optional "objective <v>"
///    line, then "<name> <value>" or "<index> <name> <value> [<dj>]" lines;
///  * sectioned: "Model status" followed by the status line, then
///    "Objective <v>" and "# Columns <n>" followed by n "<name> <value>" lines.
SolveResult parse_solution(const std::string& text);

/// Runs an LP-file solver through a shell command template. Placeholders:
/// {lp_path}, {sol_path}, {time_limit} and optionally {start_path} (a
/// name/value warm-start file).
class ExternalSolver {
 public:
  static constexpr const char* kEnvVar = "EVCS_SOLVER_CMD";

  ExternalSolver() = default;
  explicit ExternalSolver(std::string command_template)
      : command_(std::move(command_template)) {}

  /// Command taken from EVCS_SOLVER_CMD (unconfigured when unset or empty).
  static ExternalSolver from_env();

  bool configured() const { return !command_.empty(); }
  const std::string& command() const { return command_; }

  SolveResult solve(const MilpModel& model, double time_limit_s,
                    const std::vector<std::pair<std::string, double>>& start = {}) const;

 private:
  std::string command_;
};

}  // namespace evcs
