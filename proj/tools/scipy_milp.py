#!/usr/bin/env python3
# Copyright 2026 The evcs Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Solves an evcs LP file with scipy.optimize.milp (HiGHS).

Usage: scipy_milp.py LP_PATH SOL_PATH TIME_LIMIT [START_PATH]

START_PATH is an optional name/value file. When HiGHS stops at the time
limit without an incumbent, the start point or, failing that, the point with
every variable at its bound nearest zero is reported if it is feasible.

Writes a name/value solution file:
    status <optimal|time limit|infeasible|error>
    objective <value>
    <name> <value>
"""

import math
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

SECTIONS = {
    "maximize": "obj", "maximise": "obj", "max": "obj",
    "minimize": "obj", "minimise": "obj", "min": "obj",
    "subject to": "rows", "st": "rows", "s.t.": "rows",
    "bounds": "bounds", "bound": "bounds",
    "binaries": "bin", "binary": "bin", "bin": "bin",
    "generals": "gen", "general": "gen", "gen": "gen",
    "end": "end",
}
TOKEN = re.compile(r"<=|>=|=<|=>|[<>=]|[+-]?inf(?:inity)?\b|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
                   r"|[A-Za-z_][\w.\[\]]*:?|[+-]", re.IGNORECASE)


def number(tok):
    low = tok.lower()
    if low in ("inf", "+inf", "infinity", "+infinity"):
        return math.inf
    if low in ("-inf", "-infinity"):
        return -math.inf
    return float(tok)


def is_number(tok):
    try:
        number(tok)
        return True
    except ValueError:
        return False


class Model:
    def __init__(self):
        self.names = []
        self.index = {}
        self.lower = []
        self.upper = []
        self.integer = []
        self.maximize = False
        self.obj = {}
        self.obj_const = 0.0
        self.rows = []  # (terms dict, sense, rhs)

    def var(self, name):
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
            self.lower.append(0.0)
            self.upper.append(math.inf)
            self.integer.append(0)
        return self.index[name]


def parse_terms(toks, p, terms, model):
    const = 0.0
    while p < len(toks) and toks[p] not in ("<=", ">=", "=", "<", ">", "=<", "=>"):
        sign = 1.0
        while p < len(toks) and toks[p] in ("+", "-"):
            if toks[p] == "-":
                sign = -sign
            p += 1
        coef, has = 1.0, False
        if p < len(toks) and is_number(toks[p]):
            coef, has = number(toks[p]), True
            p += 1
        if p < len(toks) and toks[p] not in ("+", "-", "<=", ">=", "=", "<", ">", "=<", "=>") \
                and not is_number(toks[p]):
            v = model.var(toks[p])
            terms[v] = terms.get(v, 0.0) + sign * coef
            p += 1
        elif has:
            const += sign * coef
        else:
            raise ValueError("malformed term near %r" % toks[p:p + 3])
    return p, const


def parse(text):
    model = Model()
    section = None
    obj_toks, row_toks = [], []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = " ".join(line.lower().split())
        if key in SECTIONS:
            section = SECTIONS[key]
            if section == "obj":
                model.maximize = key.startswith("max")
            continue
        toks = TOKEN.findall(line)
        if section == "obj":
            obj_toks += toks
        elif section == "rows":
            row_toks += toks
        elif section == "bounds":
            if len(toks) == 2 and toks[1].lower() == "free":
                v = model.var(toks[0])
                model.lower[v], model.upper[v] = -math.inf, math.inf
            elif len(toks) == 5:
                v = model.var(toks[2])
                model.lower[v], model.upper[v] = number(toks[0]), number(toks[4])
            elif len(toks) == 3:
                if is_number(toks[0]):
                    v, val, sense = model.var(toks[2]), number(toks[0]), toks[1]
                    sense = {"<=": ">=", ">=": "<=", "=": "="}.get(sense, sense)
                else:
                    v, val, sense = model.var(toks[0]), number(toks[2]), toks[1]
                if sense in ("<=", "<", "=<", "="):
                    model.upper[v] = val
                if sense in (">=", ">", "=>", "="):
                    model.lower[v] = val
            else:
                raise ValueError("bad bound line: %s" % line)
        elif section in ("bin", "gen"):
            for t in toks:
                v = model.var(t)
                model.integer[v] = 1
                if section == "bin":
                    model.lower[v] = max(model.lower[v], 0.0)
                    model.upper[v] = min(model.upper[v], 1.0)
    p = 1 if obj_toks and obj_toks[0].endswith(":") else 0
    _, model.obj_const = parse_terms(obj_toks, p, model.obj, model)
    p = 0
    while p < len(row_toks):
        if row_toks[p].endswith(":"):
            p += 1
        terms = {}
        p, const = parse_terms(row_toks, p, terms, model)
        sense = row_toks[p]
        p += 1
        sign = 1.0
        while row_toks[p] in ("+", "-"):
            sign = -sign if row_toks[p] == "-" else sign
            p += 1
        rhs = sign * number(row_toks[p]) - const
        p += 1
        model.rows.append((terms, sense, rhs))
    return model


def solve(model, time_limit):
    n = len(model.names)
    c = np.zeros(n)
    for v, a in model.obj.items():
        c[v] = a
    if model.maximize:
        c = -c
    data, rows, cols, lo, hi = [], [], [], [], []
    for r, (terms, sense, rhs) in enumerate(model.rows):
        for v, a in terms.items():
            if a != 0.0:
                rows.append(r)
                cols.append(v)
                data.append(a)
        lo.append(rhs if sense in (">=", ">", "=>", "=") else -np.inf)
        hi.append(rhs if sense in ("<=", "<", "=<", "=") else np.inf)
    constraints = []
    if model.rows:
        a = csr_matrix((data, (rows, cols)), shape=(len(model.rows), n))
        constraints.append(LinearConstraint(a, np.array(lo), np.array(hi)))
    options = {"time_limit": float(time_limit), "mip_rel_gap": 1e-9}
    return milp(c, constraints=constraints, integrality=np.array(model.integer),
                bounds=Bounds(np.array(model.lower), np.array(model.upper)), options=options)


def feasible(model, x, tol=1e-7):
    for v, val in enumerate(x):
        if val < model.lower[v] - tol or val > model.upper[v] + tol:
            return False
        if model.integer[v] and abs(val - round(val)) > tol:
            return False
    for terms, sense, rhs in model.rows:
        lhs = sum(a * x[v] for v, a in terms.items())
        slack = tol * max(1.0, abs(rhs))
        if sense in ("<=", "<", "=<", "=") and lhs > rhs + slack:
            return False
        if sense in (">=", ">", "=>", "=") and lhs < rhs - slack:
            return False
    return True


def nearest_zero(model):
    return np.array([min(max(0.0, lo), hi) for lo, hi in zip(model.lower, model.upper)])


def read_start(model, path):
    x = nearest_zero(model)
    with open(path) as f:
        for line in f:
            parts = line.split()
            if len(parts) == 2 and parts[0] in model.index:
                x[model.index[parts[0]]] = float(parts[1])
    return x


def fallback_point(model, start_path):
    candidates = []
    if start_path:
        candidates.append(read_start(model, start_path))
    candidates.append(nearest_zero(model))
    for x in candidates:
        if all(math.isfinite(v) for v in x) and feasible(model, x):
            return x
    return None


def main(argv):
    if len(argv) not in (4, 5):
        sys.stderr.write(__doc__)
        return 2
    lp_path, sol_path, time_limit = argv[1], argv[2], argv[3]
    start_path = argv[4] if len(argv) == 5 else None
    with open(lp_path) as f:
        model = parse(f.read())
    res = solve(model, time_limit)
    x = res.x
    lines = []
    if res.status == 0:
        lines.append("status optimal")
    elif res.status == 1 and x is None:
        x = fallback_point(model, start_path)
    if res.status == 1:
        if x is not None:
            lines.append("status time limit")
        else:
            lines.append("status error time limit reached without a feasible point")
    elif res.status == 2:
        lines.append("status infeasible")
    elif res.status != 0:
        lines.append("status error %s" % res.message.replace("\n", " "))
    if x is not None:
        obj = float(np.dot([model.obj.get(v, 0.0) for v in range(len(model.names))], x))
        lines.append("objective %.17g" % (obj + model.obj_const))
        for name, value in zip(model.names, x):
            lines.append("%s %.17g" % (name, value))
    with open(sol_path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
