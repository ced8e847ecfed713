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

#include "evcs/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <unordered_set>

#include "evcs/error.hpp"
#include "evcs/instance_io.hpp"

namespace evcs {

namespace {

constexpr std::size_t kTermsPerLine = 8;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<Term> sorted_terms(const MilpModel& model, std::vector<Term> terms) {
  const auto& vars = model.variables();
  std::erase_if(terms, [](const Term& t) { return t.coef == 0.0; });
  std::stable_sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
    return vars[a.var].name < vars[b.var].name;
  });
  return terms;
}

void write_terms(std::string& out, const MilpModel& model, const std::vector<Term>& terms) {
  const auto& vars = model.variables();
  for (std::size_t q = 0; q < terms.size(); ++q) {
    if (q > 0 && q % kTermsPerLine == 0) out += "\n   ";
    const double c = terms[q].coef;
    if (q == 0) {
      out += c < 0 ? " - " : " ";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    out += num(std::abs(c));
    out += ' ';
    out += vars[terms[q].var].name;
  }
}

const char* sense_token(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual: return "<=";
    case RowSense::kGreaterEqual: return ">=";
    case RowSense::kEqual: return "=";
  }
  return "=";
}

}  // namespace

std::string write_lp(const MilpModel& model) {
  model.validate();
  std::string out;
  out += "\\ evcs model: " + std::to_string(model.num_variables()) + " variables, " +
         std::to_string(model.num_constraints()) + " constraints\n";
  out += model.objective_sense() == ObjectiveSense::kMaximize ? "Maximize\n" : "Minimize\n";
  out += " obj:";
  const auto obj = sorted_terms(model, model.objective());
  write_terms(out, model, obj);
  if (model.objective_constant() != 0.0 || obj.empty()) {
    const double c = model.objective_constant();
    out += obj.empty() ? (c < 0 ? " - " : " ") : (c < 0 ? " - " : " + ");
    out += num(std::abs(c));
  }
  out += "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    out += ' ';
    out += c.name;
    out += ':';
    const auto terms = sorted_terms(model, c.terms);
    write_terms(out, model, terms);
    if (terms.empty()) out += " 0 " + model.variables().front().name;
    out += ' ';
    out += sense_token(c.sense);
    out += ' ';
    out += num(c.rhs);
    out += '\n';
  }
  std::vector<int> order(model.num_variables());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<int>(v);
  const auto& vars = model.variables();
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vars[a].name < vars[b].name; });
  out += "Bounds\n";
  for (int v : order) {
    const auto& var = vars[v];
    if (std::isinf(var.lower) && var.lower < 0 && std::isinf(var.upper) && var.upper > 0) {
      out += ' ' + var.name + " free\n";
    } else {
      out += ' ' + num(var.lower) + " <= " + var.name + " <= " + num(var.upper) + '\n';
    }
  }
  for (auto [type, header] : {std::pair{VarType::kBinary, "Binaries"},
                              std::pair{VarType::kInteger, "Generals"}}) {
    std::string section;
    std::size_t on_line = 0;
    for (int v : order) {
      if (vars[v].type != type) continue;
      section += ' ';
      section += vars[v].name;
      if (++on_line == kTermsPerLine) {
        section += '\n';
        on_line = 0;
      }
    }
    if (section.empty()) continue;
    if (on_line != 0) section += '\n';
    out += header;
    out += '\n';
    out += section;
  }
  out += "End\n";
  return out;
}

void export_lp(const MilpModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, write_lp(model));
}

namespace {

struct Token {
  std::string text;
  int line;
};

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries, kGenerals, kEnd };

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  const std::string l = lower(s);
  if (l == "inf" || l == "+inf" || l == "-inf" || l == "infinity" || l == "+infinity" ||
      l == "-infinity") {
    return true;
  }
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

double to_number(const std::string& s) {
  const std::string l = lower(s);
  if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") return kInf;
  if (l == "-inf" || l == "-infinity") return -kInf;
  return std::strtod(s.c_str(), nullptr);
}

bool is_sense(const std::string& s) {
  return s == "<=" || s == ">=" || s == "=" || s == "<" || s == ">" || s == "=<" || s == "=>";
}

RowSense to_sense(const std::string& s) {
  if (s == "<=" || s == "<" || s == "=<") return RowSense::kLessEqual;
  if (s == ">=" || s == ">" || s == "=>") return RowSense::kGreaterEqual;
  return RowSense::kEqual;
}

/// Splits a line into tokens: operators, signs, numbers and names. "name:"
/// keeps its colon.
std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while (p < line.size()) {
    const char c = line[p];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++p;
    } else if (c == '<' || c == '>' || c == '=') {
      std::size_t q = p + 1;
      if (q < line.size() && (line[q] == '=' || line[q] == '<' || line[q] == '>')) ++q;
      out.push_back(line.substr(p, q - p));
      p = q;
    } else if (c == '+' || c == '-') {
      // Attach a sign to an immediately following infinity keyword.
      std::size_t q = p + 1;
      std::size_t e = q;
      while (e < line.size() && std::isalpha(static_cast<unsigned char>(line[e]))) ++e;
      const std::string word = lower(line.substr(q, e - q));
      if (word == "inf" || word == "infinity") {
        out.push_back(line.substr(p, e - p));
        p = e;
      } else {
        out.push_back(std::string(1, c));
        ++p;
      }
    } else if (c == ':') {
      if (!out.empty()) out.back() += ':';
      ++p;
    } else {
      std::size_t q = p;
      const bool numeric = std::isdigit(static_cast<unsigned char>(c)) || c == '.';
      while (q < line.size()) {
        const char d = line[q];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '<' || d == '>' || d == '=' ||
            d == ':') {
          break;
        }
        if ((d == '+' || d == '-') && !(numeric && (line[q - 1] == 'e' || line[q - 1] == 'E'))) break;
        ++q;
      }
      out.push_back(line.substr(p, q - p));
      p = q;
    }
  }
  return out;
}

class LpParser {
 public:
  explicit LpParser(const std::string& text) : text_(text) {}

  MilpModel parse() {
    std::istringstream in(text_);
    std::string line;
    int line_no = 0;
    std::vector<Token> objective;
    std::vector<Token> rows;
    while (std::getline(in, line)) {
      ++line_no;
      const auto bs = line.find('\\');
      if (bs != std::string::npos) line.erase(bs);
      const auto toks = split_line(line);
      if (toks.empty()) continue;
      const std::string head = lower(toks[0]);
      if (toks.size() <= 2 && section_from(head, toks.size() == 2 ? lower(toks[1]) : "")) continue;
      switch (section_) {
        case Section::kObjective:
          for (const auto& t : toks) objective.push_back({t, line_no});
          break;
        case Section::kConstraints:
          for (const auto& t : toks) rows.push_back({t, line_no});
          break;
        case Section::kBounds:
          parse_bound(toks, line_no);
          break;
        case Section::kBinaries:
        case Section::kGenerals:
          for (const auto& t : toks) {
            const int v = var(t, line_no);
            auto& variable = model_.variables()[v];
            variable.type = section_ == Section::kBinaries ? VarType::kBinary : VarType::kInteger;
            if (section_ == Section::kBinaries && !bounded_.count(t)) {
              variable.lower = 0.0;
              variable.upper = 1.0;
            }
          }
          break;
        case Section::kNone:
          fail(line_no, "content before the objective section");
        case Section::kEnd:
          fail(line_no, "content after End");
      }
    }
    if (section_ != Section::kEnd) fail(line_no, "missing End");
    parse_objective(objective);
    parse_rows(rows);
    model_.validate();
    return std::move(model_);
  }

 private:
  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ParseError("LP line " + std::to_string(line) + ": " + what);
  }

  bool section_from(const std::string& a, const std::string& b) {
    if ((a == "maximize" || a == "maximise" || a == "max") && b.empty()) {
      sense_ = ObjectiveSense::kMaximize;
      section_ = Section::kObjective;
    } else if ((a == "minimize" || a == "minimise" || a == "min") && b.empty()) {
      sense_ = ObjectiveSense::kMinimize;
      section_ = Section::kObjective;
    } else if ((a == "subject" && b == "to") || ((a == "st" || a == "s.t.") && b.empty())) {
      section_ = Section::kConstraints;
    } else if ((a == "bounds" || a == "bound") && b.empty()) {
      section_ = Section::kBounds;
    } else if ((a == "binaries" || a == "binary" || a == "bin") && b.empty()) {
      section_ = Section::kBinaries;
    } else if ((a == "generals" || a == "general" || a == "gen") && b.empty()) {
      section_ = Section::kGenerals;
    } else if (a == "end" && b.empty()) {
      section_ = Section::kEnd;
    } else {
      return false;
    }
    return true;
  }

  int var(const std::string& name, int line) {
    if (name.empty() || is_number(name) || is_sense(name) || name == "+" || name == "-") {
      fail(line, "expected a variable name, got '" + name + "'");
    }
    if (auto v = model_.find(name)) return *v;
    return model_.add_variable(name, 0.0, kInf, VarType::kContinuous);
  }

  void parse_bound(const std::vector<std::string>& toks, int line) {
    if (toks.size() == 2 && lower(toks[1]) == "free") {
      const int v = var(toks[0], line);
      model_.variables()[v].lower = -kInf;
      model_.variables()[v].upper = kInf;
      bounded_.insert(toks[0]);
      return;
    }
    if (toks.size() == 5 && is_number(toks[0]) && is_sense(toks[1]) && is_sense(toks[3]) &&
        is_number(toks[4])) {
      const int v = var(toks[2], line);
      model_.variables()[v].lower = to_number(toks[0]);
      model_.variables()[v].upper = to_number(toks[4]);
      bounded_.insert(toks[2]);
      return;
    }
    if (toks.size() == 3 && is_sense(toks[1])) {
      const bool var_first = !is_number(toks[0]);
      const std::string& name = var_first ? toks[0] : toks[2];
      const double value = to_number(var_first ? toks[2] : toks[0]);
      const int v = var(name, line);
      RowSense s = to_sense(toks[1]);
      if (!var_first && s != RowSense::kEqual) {
        s = s == RowSense::kLessEqual ? RowSense::kGreaterEqual : RowSense::kLessEqual;
      }
      auto& variable = model_.variables()[v];
      if (s != RowSense::kGreaterEqual) variable.upper = value;
      if (s != RowSense::kLessEqual) variable.lower = value;
      bounded_.insert(name);
      return;
    }
    fail(line, "unrecognised bound");
  }

  /// Reads [sign] [coef] [name] terms until a sense token or the end.
  std::size_t parse_terms(const std::vector<Token>& toks, std::size_t p, std::vector<Term>& terms,
                          double& constant) {
    while (p < toks.size() && !is_sense(toks[p].text)) {
      double sign = 1.0;
      while (p < toks.size() && (toks[p].text == "+" || toks[p].text == "-")) {
        if (toks[p].text == "-") sign = -sign;
        ++p;
      }
      if (p >= toks.size()) fail(toks.back().line, "dangling sign");
      double coef = 1.0;
      bool has_coef = false;
      if (is_number(toks[p].text)) {
        coef = to_number(toks[p].text);
        has_coef = true;
        ++p;
      }
      const bool name_follows = p < toks.size() && !is_sense(toks[p].text) &&
                                toks[p].text != "+" && toks[p].text != "-" &&
                                !is_number(toks[p].text);
      if (name_follows) {
        terms.push_back({var(toks[p].text, toks[p].line), sign * coef});
        ++p;
      } else if (has_coef) {
        constant += sign * coef;
      } else {
        fail(toks[p < toks.size() ? p : toks.size() - 1].line, "malformed term");
      }
    }
    return p;
  }

  void parse_objective(const std::vector<Token>& toks) {
    std::size_t p = 0;
    if (!toks.empty() && toks[0].text.back() == ':') p = 1;
    std::vector<Term> terms;
    double constant = 0.0;
    p = parse_terms(toks, p, terms, constant);
    if (p != toks.size()) fail(toks[p].line, "unexpected token in objective");
    model_.set_objective(sense_, std::move(terms), constant);
  }

  void parse_rows(const std::vector<Token>& toks) {
    std::size_t p = 0;
    int unnamed = 0;
    while (p < toks.size()) {
      std::string name;
      const int line = toks[p].line;
      if (toks[p].text.back() == ':') {
        name = toks[p].text.substr(0, toks[p].text.size() - 1);
        ++p;
      } else {
        name = "R" + std::to_string(++unnamed);
      }
      std::vector<Term> terms;
      double constant = 0.0;
      p = parse_terms(toks, p, terms, constant);
      if (p + 1 >= toks.size()) fail(line, "constraint '" + name + "' has no right-hand side");
      const RowSense sense = to_sense(toks[p].text);
      ++p;
      double sign = 1.0;
      while (p < toks.size() && (toks[p].text == "+" || toks[p].text == "-")) {
        if (toks[p].text == "-") sign = -sign;
        ++p;
      }
      if (p >= toks.size() || !is_number(toks[p].text)) {
        fail(line, "constraint '" + name + "' has a malformed right-hand side");
      }
      const double rhs = sign * to_number(toks[p].text) - constant;
      ++p;
      // Zero-coefficient placeholders keep empty rows syntactically valid.
      terms.erase(std::remove_if(terms.begin(), terms.end(), [](const Term& t) { return t.coef == 0.0; }),
                  terms.end());
      model_.add_constraint(name, std::move(terms), sense, rhs);
    }
  }

  const std::string& text_;
  Section section_ = Section::kNone;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  MilpModel model_;
  std::unordered_set<std::string> bounded_;
};

}  // namespace

MilpModel parse_lp(const std::string& text) { return LpParser(text).parse(); }

}  // namespace evcs
