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

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace evcs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { kContinuous, kBinary, kInteger };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class ObjectiveSense { kMinimize, kMaximize };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::kContinuous;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

/// Solver-agnostic linear model.
class MilpModel {
 public:
  int add_variable(std::string name, double lower, double upper, VarType type);
  int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarType::kBinary); }
  int add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);

  void set_objective(ObjectiveSense sense, std::vector<Term> terms, double constant = 0.0);

  std::optional<int> find(const std::string& name) const;

  const std::vector<Variable>& variables() const { return variables_; }
  std::vector<Variable>& variables() { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  ObjectiveSense objective_sense() const { return sense_; }
  const std::vector<Term>& objective() const { return objective_; }
  double objective_constant() const { return constant_; }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  std::size_t count(VarType type) const;

  /// Throws ValidationError on duplicate or malformed names, dangling
  /// references, non-finite coefficients or inconsistent bounds.
  void validate() const;

  /// Objective value of an assignment given by variable index.
  double objective_value(const std::vector<double>& values) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> duplicates_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  std::vector<Term> objective_;
  double constant_ = 0.0;
};

}  // namespace evcs
