#!/usr/bin/env python3
"""Cross-checks exported LP files against the exhaustive oracle.

Usage: lp_crosscheck.py <induct-cli> <workdir>

Generates the fixed micro-instance catalog, exports each instance as an LP
file, re-parses the file with an independent reader, solves the model with
scipy's MILP interface (HiGHS), and requires the optimum to match the oracle
within 1e-6 (or agree on infeasibility). Exits non-zero on any mismatch.
"""

import re
import subprocess
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix

TERM_RE = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z]\w*)")
NUM_RE = re.compile(r"[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")


def parse_terms(text):
    terms = []
    for sign, coef, name in TERM_RE.findall(text):
        value = float(coef) if coef else 1.0
        if sign == "-":
            value = -value
        terms.append((name, value))
    return terms


def parse_lp(path):
    """Returns (objective dict, rows, bounds, integer set, binary set)."""
    section = None
    objective = {}
    rows = []  # (name, {var: coef}, sense, rhs)
    bounds = {}
    integers, binaries = set(), set()
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("minimize", "subject to", "bounds", "generals", "binaries", "end"):
            section = lowered
            continue
        if section == "minimize":
            body = line.split(":", 1)[1]
            for name, coef in parse_terms(body):
                objective[name] = objective.get(name, 0.0) + coef
        elif section == "subject to":
            name, body = line.split(":", 1)
            m = re.search(r"(<=|>=|=)\s*(\S+)\s*$", body)
            sense, rhs = m.group(1), float(m.group(2))
            coeffs = {}
            for var, coef in parse_terms(body[: m.start()]):
                coeffs[var] = coeffs.get(var, 0.0) + coef
            rows.append((name.strip(), coeffs, sense, rhs))
        elif section == "bounds":
            if "<=" in line:
                parts = [p.strip() for p in line.split("<=")]
                if len(parts) == 3:
                    bounds[parts[1]] = (float(parts[0]), float(parts[2]))
                elif NUM_RE.fullmatch(parts[0]):
                    bounds[parts[1]] = (float(parts[0]), np.inf)
                else:
                    bounds[parts[0]] = (-np.inf, float(parts[1]))
            elif "=" in line:
                name, value = [p.strip() for p in line.split("=")]
                bounds[name] = (float(value), float(value))
        elif section == "generals":
            integers.update(line.split())
        elif section == "binaries":
            binaries.update(line.split())
    return objective, rows, bounds, integers, binaries


def solve_lp(path):
    objective, rows, bounds, integers, binaries = parse_lp(path)
    names = sorted(
        set(objective)
        | {v for _, coeffs, _, _ in rows for v in coeffs}
        | set(bounds)
        | integers
        | binaries
    )
    index = {n: i for i, n in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for name, coef in objective.items():
        c[index[name]] = coef
    lb = np.zeros(n)
    ub = np.full(n, np.inf)
    integrality = np.zeros(n)
    for name in binaries:
        ub[index[name]] = 1.0
        integrality[index[name]] = 1
    for name in integers:
        integrality[index[name]] = 1
    for name, (lo, hi) in bounds.items():
        lb[index[name]], ub[index[name]] = lo, hi
    a = lil_matrix((len(rows), n))
    row_lb = np.full(len(rows), -np.inf)
    row_ub = np.full(len(rows), np.inf)
    for r, (_, coeffs, sense, rhs) in enumerate(rows):
        for name, coef in coeffs.items():
            a[r, index[name]] = coef
        if sense in ("<=", "="):
            row_ub[r] = rhs
        if sense in (">=", "="):
            row_lb[r] = rhs
    res = milp(
        c,
        constraints=LinearConstraint(a.tocsc(), row_lb, row_ub),
        integrality=integrality,
        bounds=Bounds(lb, ub),
    )
    stats = {"vars": n, "rows": len(rows)}
    if res.status == 2:  # infeasible
        return None, stats
    if not res.success:
        raise RuntimeError(f"solver failed on {path}: {res.message}")
    return res.fun, stats


def run(cmd):
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc.returncode, proc.stdout + proc.stderr


def main():
    cli, workdir = sys.argv[1], Path(sys.argv[2]) / "lp_crosscheck"
    inst_dir = workdir / "inst"
    code, out = run([cli, "generate", "--out", str(inst_dir), "--family", "tiny"])
    if code != 0:
        print(out)
        return 1
    failures = 0
    for inst in sorted(inst_dir.glob("*.txt")):
        code, out = run([cli, "oracle", "--instance", str(inst)])
        oracle = None
        if code == 0:
            oracle = float(re.search(r"optimum (\S+)", out).group(1))
        elif code != 2:
            print(f"{inst.name}: oracle error: {out}")
            failures += 1
            continue
        lp_path = workdir / (inst.stem + ".lp")
        code, out = run(
            [cli, "export-mip", "--instance", str(inst), "--out", str(lp_path), "--copies", "1"]
        )
        if code != 0:
            print(f"{inst.name}: export error: {out}")
            failures += 1
            continue
        reported = re.search(r"\((\d+) variables, (\d+) rows\)", out)
        objective, stats = solve_lp(lp_path)
        if (int(reported.group(1)), int(reported.group(2))) != (stats["vars"], stats["rows"]):
            print(f"{inst.name}: re-parsed variable/row counts disagree with exporter")
            failures += 1
        if (objective is None) != (oracle is None):
            print(f"{inst.name}: feasibility disagrees (solver={objective}, oracle={oracle})")
            failures += 1
        elif objective is not None and abs(objective - oracle) > 1e-6:
            print(f"{inst.name}: solver optimum {objective} != oracle {oracle}")
            failures += 1
        else:
            shown = "infeasible" if objective is None else f"{objective:.6f}"
            print(f"{inst.name}: ok ({shown})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
