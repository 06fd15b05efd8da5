#!/usr/bin/env python3
"""Solve exported MPS models with scipy's HiGHS MILP and compare against `ehc solve`."""
import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix


def read_mps(path):
    rows, kinds, cols, obj = {}, [], {}, []
    entries, rhs = [], {}
    lower, upper = {}, {}
    objective_row = None
    section = None
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.startswith("*"):
            continue
        tok = line.split()
        if not line[0].isspace():
            section = tok[0]
            continue
        if section == "ROWS":
            if tok[0] == "N":
                objective_row = objective_row or tok[1]
            else:
                rows[tok[1]] = len(kinds)
                kinds.append(tok[0])
        elif section == "COLUMNS":
            if len(tok) >= 3 and tok[1] == "'MARKER'":
                continue
            c = cols.setdefault(tok[0], len(cols))
            if c == len(obj):
                obj.append(0.0)
            for name, value in zip(tok[1::2], tok[2::2]):
                if name == objective_row:
                    obj[c] += float(value)
                else:
                    entries.append((rows[name], c, float(value)))
        elif section == "RHS":
            for name, value in zip(tok[1::2], tok[2::2]):
                if name != objective_row:
                    rhs[rows[name]] = float(value)
        elif section == "BOUNDS":
            c = cols[tok[2]]
            if tok[0] == "BV":
                lower[c], upper[c] = 0.0, 1.0
            elif tok[0] == "UP":
                upper[c] = float(tok[3])
            elif tok[0] == "LO":
                lower[c] = float(tok[3])
    n, m = len(cols), len(kinds)
    a = csr_matrix(([e[2] for e in entries], ([e[0] for e in entries], [e[1] for e in entries])), shape=(m, n))
    b = np.array([rhs.get(i, 0.0) for i in range(m)])
    lo = np.where([k == "L" for k in kinds], -np.inf, b)
    hi = np.where([k == "G" for k in kinds], np.inf, b)
    bounds = Bounds([lower.get(c, 0.0) for c in range(n)], [upper.get(c, np.inf) for c in range(n)])
    return np.array(obj), a, lo, hi, bounds


def solve_mps(path):
    c, a, lo, hi, bounds = read_mps(path)
    res = milp(c, constraints=[LinearConstraint(a, lo, hi)], integrality=np.ones(len(c)), bounds=bounds)
    return res.status, (res.fun if res.status == 0 else None)


def run(ehc, *args):
    subprocess.run([ehc, *args], check=False, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("ehc")
    p.add_argument("--data", required=True)
    args = p.parse_args()

    cases = []
    for preset in ["P1.1", "P1.2", "S1.1", "S1.2", "M1.1", "M1.2"]:
        for config in ["C1", "C2", "C3"]:
            for objective in ["latency", "energy"]:
                cases.append((preset, config, objective))
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        graphs = {}
        for seed, preset in enumerate(["P1.1", "P1.2", "S1.1", "S1.2", "M1.1", "M1.2"], start=1):
            run(args.ehc, "generate", "--preset", preset, "--seed", str(seed), "--out", str(tmp))
            graphs[preset] = tmp / f"{preset}.json"
        graphs["inspection15"] = Path(args.data) / "tfg" / "inspection15.json"
        for config in ["C1", "C2", "C3"]:
            for objective in ["latency", "energy"]:
                cases.append(("inspection15", config, objective))
        for preset, config, objective in cases:
            out = tmp / f"{preset}-{config}-{objective}"
            common = ["--tfg", str(graphs[preset]), "--config", config, "--objective", objective, "--out", str(out)]
            run(args.ehc, "solve", *common)
            run(args.ehc, "export", *common, "--format", "mps")
            sol = json.loads((out / "solution.json").read_text())
            status, value = solve_mps(out / "model.mps")
            ours = sol.get("value_approx")
            if value is None or ours is None:
                ok = value is None and ours is None
            else:
                ok = abs(value - ours) <= 1e-6 * max(1.0, abs(ours))
            failures += not ok
            print(f"{'ok  ' if ok else 'FAIL'} {preset} {config} {objective}: highs={value} ehc={ours}")
    print(f"{len(cases) - failures}/{len(cases)} models agree")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
