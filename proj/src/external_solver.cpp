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

#include "evcs/external_solver.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <unistd.h>

#include "evcs/error.hpp"
#include "evcs/instance_io.hpp"
#include "evcs/lp_format.hpp"

namespace evcs {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

/// Maps a free-form status line; returns false if the line is not a status.
bool classify_status(const std::string& raw, SolveStatus& status) {
  const std::string s = lower(raw);
  if (s.find("infeasible") != std::string::npos) {
    status = SolveStatus::kInfeasible;
  } else if (s.find("optimal") != std::string::npos) {
    status = SolveStatus::kOptimal;
  } else if (s.find("time") != std::string::npos || s.find("stopped") != std::string::npos ||
             s.find("feasible") != std::string::npos || s.find("limit") != std::string::npos) {
    status = SolveStatus::kFeasibleTimeout;
  } else if (s.find("unbounded") != std::string::npos || s.find("error") != std::string::npos) {
    status = SolveStatus::kError;
  } else {
    return false;
  }
  return true;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
    s.replace(p, from.size(), to);
  }
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasibleTimeout: return "feasible-timeout";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kError: return "error";
    case SolveStatus::kNotConfigured: return "external solver not configured";
  }
  return "error";
}

std::optional<double> SolveResult::value(const std::string& name) const {
  for (const auto& [n, v] : values) {
    if (n == name) return v;
  }
  return std::nullopt;
}

SolveResult parse_solution(const std::string& text) {
  SolveResult res;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    lines.push_back(line);
  }
  bool status_seen = false;
  bool objective_seen = false;
  std::string status_line;

  const bool sectioned = !lines.empty() && lower(lines[0]) == "model status";
  if (sectioned) {
    for (std::size_t p = 0; p < lines.size(); ++p) {
      const auto w = words(lines[p]);
      if (lower(lines[p]) == "model status" && p + 1 < lines.size()) {
        status_seen = classify_status(lines[p + 1], res.status);
        status_line = lines[p + 1];
        ++p;
      } else if (w.size() == 2 && lower(w[0]) == "objective") {
        objective_seen = parse_double(w[1], res.objective);
      } else if (w.size() == 3 && w[0] == "#" && lower(w[1]) == "columns") {
        const long n = std::strtol(w[2].c_str(), nullptr, 10);
        for (long c = 0; c < n && p + 1 < lines.size(); ++c) {
          const auto cw = words(lines[++p]);
          double v = 0.0;
          if (cw.size() >= 2 && parse_double(cw[1], v)) res.values.emplace_back(cw[0], v);
        }
        // Only the primal column block is needed.
        break;
      }
    }
  } else {
    for (const auto& l : lines) {
      const auto w = words(l);
      if (w.empty()) continue;
      double v = 0.0;
      if (w.size() >= 3 && parse_double(w[0], v) && !parse_double(w[1], v) &&
          parse_double(w[2], v)) {
        res.values.emplace_back(w[1], v);  // index name value [dj]
      } else if (w.size() == 2 && !parse_double(w[0], v) && parse_double(w[1], v) &&
                 lower(w[0]) != "objective" && lower(w[0]) != "objective:") {
        res.values.emplace_back(w[0], v);
      } else if (w.size() == 2 && (lower(w[0]) == "objective" || lower(w[0]) == "objective:")) {
        objective_seen = parse_double(w[1], res.objective);
      } else if (!status_seen) {
        status_seen = classify_status(l, res.status);
        status_line = l;
        const auto pos = lower(l).find("objective value");
        if (pos != std::string::npos) {
          const auto tail = words(l.substr(pos + 15));
          if (!tail.empty()) objective_seen = parse_double(tail[0], res.objective);
        }
        if (lower(w[0]) == "status" && w.size() >= 2) status_seen = classify_status(w[1], res.status);
      }
    }
  }
  if (!status_seen) {
    res.status = res.values.empty() ? SolveStatus::kError : SolveStatus::kFeasibleTimeout;
    res.message = "solution file has no recognisable status line";
  }
  if (res.status == SolveStatus::kFeasibleTimeout && res.values.empty()) {
    res.status = SolveStatus::kError;
    res.message = "solver stopped without an incumbent";
  }
  if (res.has_solution() && !objective_seen) res.message = "objective value missing";
  if (res.status == SolveStatus::kError && res.message.empty()) res.message = status_line;
  return res;
}

ExternalSolver ExternalSolver::from_env() {
  const char* cmd = std::getenv(kEnvVar);
  return ExternalSolver(cmd ? std::string(cmd) : std::string());
}

SolveResult ExternalSolver::solve(const MilpModel& model, double time_limit_s,
                                  const std::vector<std::pair<std::string, double>>& start) const {
  SolveResult res;
  if (!configured()) {
    res.status = SolveStatus::kNotConfigured;
    res.message = "external solver not configured (set --solver-cmd or EVCS_SOLVER_CMD)";
    return res;
  }
  static std::atomic<unsigned> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("evcs-solve-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(dir);
  const auto lp = dir / "model.lp";
  const auto sol = dir / "model.sol";
  const auto warm = dir / "start.sol";
  const auto log = dir / "solver.log";
  export_lp(model, lp);
  std::string cmd = command_;
  if (cmd.find("{start_path}") != std::string::npos) {
    std::string text;
    for (const auto& [n, v] : start) text += n + " " + std::to_string(v) + "\n";
    write_file_atomic(warm, text);
    replace_all(cmd, "{start_path}", shell_quote(warm.string()));
  }
  replace_all(cmd, "{lp_path}", shell_quote(lp.string()));
  replace_all(cmd, "{sol_path}", shell_quote(sol.string()));
  char limit[32];
  std::snprintf(limit, sizeof(limit), "%g", time_limit_s);
  replace_all(cmd, "{time_limit}", limit);
  cmd += " > " + shell_quote(log.string()) + " 2>&1";

  const auto t0 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.c_str());
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (std::filesystem::exists(sol)) {
    SolveResult parsed = parse_solution(read_file(sol));
    parsed.wall_seconds = res.wall_seconds;
    res = std::move(parsed);
  } else {
    res.status = SolveStatus::kError;
    std::string tail;
    if (std::filesystem::exists(log)) {
      tail = read_file(log);
      if (tail.size() > 400) tail = tail.substr(tail.size() - 400);
    }
    res.message = "solver exited with code " + std::to_string(rc) +
                  " and wrote no solution file" + (tail.empty() ? "" : ": " + tail);
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return res;
}

}  // namespace evcs
