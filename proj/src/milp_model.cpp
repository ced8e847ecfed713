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

#include "evcs/milp_model.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "evcs/error.hpp"

namespace evcs {

namespace {

bool valid_name(const std::string& name) {
  if (name.empty() || name.size() > 255) return false;
  const unsigned char first = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(first) || first == '_')) return false;
  for (unsigned char c : name) {
    if (!(std::isalnum(c) || c == '_' || c == '.' || c == '[' || c == ']')) return false;
  }
  return true;
}

}  // namespace

int MilpModel::add_variable(std::string name, double lower, double upper, VarType type) {
  const int id = static_cast<int>(variables_.size());
  if (!index_.emplace(name, id).second) duplicates_.push_back(name);
  variables_.push_back({std::move(name), lower, upper, type});
  return id;
}

int MilpModel::add_constraint(std::string name, std::vector<Term> terms, RowSense sense,
                              double rhs) {
  constraints_.push_back({std::move(name), std::move(terms), sense, rhs});
  return static_cast<int>(constraints_.size() - 1);
}

void MilpModel::set_objective(ObjectiveSense sense, std::vector<Term> terms, double constant) {
  sense_ = sense;
  objective_ = std::move(terms);
  constant_ = constant;
}

std::optional<int> MilpModel::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::count(VarType type) const {
  std::size_t n = 0;
  for (const auto& v : variables_) n += v.type == type ? 1 : 0;
  return n;
}

void MilpModel::validate() const {
  if (!duplicates_.empty()) {
    throw ValidationError("duplicate variable name '" + duplicates_.front() + "'");
  }
  std::unordered_set<std::string> row_names;
  for (const auto& v : variables_) {
    if (!valid_name(v.name)) throw ValidationError("invalid variable name '" + v.name + "'");
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw ValidationError("variable '" + v.name + "' has inconsistent bounds");
    }
    if (v.type == VarType::kBinary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw ValidationError("binary variable '" + v.name + "' has bounds outside [0, 1]");
    }
  }
  auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= static_cast<int>(variables_.size())) {
        throw ValidationError(where + " references an undeclared variable");
      }
      if (!std::isfinite(t.coef)) {
        throw ValidationError(where + " has a non-finite coefficient");
      }
    }
  };
  for (const auto& c : constraints_) {
    if (!valid_name(c.name)) throw ValidationError("invalid constraint name '" + c.name + "'");
    if (!row_names.insert(c.name).second) {
      throw ValidationError("duplicate constraint name '" + c.name + "'");
    }
    if (index_.count(c.name)) {
      throw ValidationError("constraint name '" + c.name + "' collides with a variable");
    }
    if (!std::isfinite(c.rhs)) throw ValidationError("constraint '" + c.name + "' has a non-finite rhs");
    check_terms(c.terms, "constraint '" + c.name + "'");
  }
  check_terms(objective_, "objective");
  if (!std::isfinite(constant_)) throw ValidationError("objective constant is not finite");
}

double MilpModel::objective_value(const std::vector<double>& values) const {
  double v = constant_;
  for (const auto& t : objective_) v += t.coef * values.at(t.var);
  return v;
}

}  // namespace evcs
