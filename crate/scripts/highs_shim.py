#!/usr/bin/env python3
"""HiGHS backend for mmct, through scipy.optimize.milp.

One-shot:  highs_shim.py MODEL.mps SOLUTION.sol TIME_LIMIT
Serve:     highs_shim.py --serve
           reads "MODEL SOLUTION TIME_LIMIT" lines on stdin, answers
           "done STATUS" per request on stdout.

The solution file has header lines "#status", "#objective", "#bound",
"#time" followed by one "name value" line per column.
"""

import math
import sys
import time

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix


def read_mps(path):
    rows, row_index, sense = [], {}, {}
    objective = None
    cols, col_index = [], {}
    entries = []  # (row, col, value)
    obj = {}
    rhs = {}
    lower, upper, integer = {}, {}, set()
    section = None
    with open(path) as fh:
        for raw in fh:
            if not raw.strip() or raw.startswith("*"):
                continue
            if not raw[0].isspace():
                section = raw.split()[0]
                continue
            tok = raw.split()
            if section == "ROWS":
                kind, name = tok
                if kind == "N":
                    objective = name
                else:
                    row_index[name] = len(rows)
                    rows.append(name)
                    sense[name] = kind
            elif section == "COLUMNS":
                name = tok[0]
                if name not in col_index:
                    col_index[name] = len(cols)
                    cols.append(name)
                j = col_index[name]
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r == objective:
                        obj[j] = float(v)
                    else:
                        entries.append((row_index[r], j, float(v)))
            elif section == "RHS":
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r != objective:
                        rhs[r] = float(v)
            elif section == "BOUNDS":
                kind, _, name = tok[:3]
                j = col_index[name]
                val = float(tok[3]) if len(tok) > 3 else None
                if kind == "BV":
                    integer.add(j)
                    lower[j], upper[j] = 0.0, 1.0
                elif kind == "FX":
                    lower[j] = upper[j] = val
                elif kind == "LO":
                    lower[j] = val
                elif kind == "UP":
                    upper[j] = val
                elif kind == "MI":
                    lower[j] = -math.inf
                elif kind == "PL":
                    upper[j] = math.inf
                else:
                    raise ValueError(f"unsupported bound type {kind}")
    n, m = len(cols), len(rows)
    c = np.zeros(n)
    for j, v in obj.items():
        c[j] = v
    if entries:
        r, j, v = zip(*entries)
        a = csr_matrix((v, (r, j)), shape=(m, n))
    else:
        a = csr_matrix((m, n))
    lo_row = np.full(m, -np.inf)
    up_row = np.full(m, np.inf)
    for i, name in enumerate(rows):
        b = rhs.get(name, 0.0)
        if sense[name] in ("L", "E"):
            up_row[i] = b
        if sense[name] in ("G", "E"):
            lo_row[i] = b
    lb = np.array([lower.get(j, 0.0) for j in range(n)])
    ub = np.array([upper.get(j, np.inf) for j in range(n)])
    integrality = np.array([1 if j in integer else 0 for j in range(n)])
    return cols, c, a, lo_row, up_row, lb, ub, integrality


def solve(model_path, solution_path, time_limit):
    started = time.monotonic()
    cols, c, a, lo_row, up_row, lb, ub, integrality = read_mps(model_path)
    constraints = [LinearConstraint(a, lo_row, up_row)] if a.shape[0] else []
    options = {"time_limit": max(float(time_limit), 1e-3), "mip_rel_gap": 1e-9, "disp": False}
    res = milp(c, constraints=constraints, integrality=integrality, bounds=Bounds(lb, ub), options=options)
    x = res.x
    if res.status == 0:
        status = "optimal"
    elif res.status == 2:
        status = "infeasible"
    elif res.status == 1:
        status = "feasible" if x is not None else "timeout"
    elif res.status == 3:
        status = "error"
    else:
        status = "feasible" if x is not None else "unknown"
    bound = getattr(res, "mip_dual_bound", None)

    if x is not None and integrality.any():
        # fix the rounded integers and re-solve for clean continuous values
        fixed_lb, fixed_ub = lb.copy(), ub.copy()
        ints = integrality == 1
        rounded = np.round(x[ints])
        fixed_lb[ints] = rounded
        fixed_ub[ints] = rounded
        polish = milp(c, constraints=constraints, integrality=np.zeros_like(integrality),
                      bounds=Bounds(fixed_lb, fixed_ub), options={"disp": False})
        if polish.status == 0:
            x = polish.x
            x[ints] = rounded

    with open(solution_path, "w") as out:
        out.write(f"#status {status}\n")
        if x is not None:
            out.write(f"#objective {float(c @ x)!r}\n")
        if bound is not None and not (isinstance(bound, float) and math.isnan(bound)):
            out.write(f"#bound {float(bound)!r}\n")
        elif status == "optimal" and x is not None:
            out.write(f"#bound {float(c @ x)!r}\n")
        out.write(f"#time {time.monotonic() - started!r}\n")
        if x is not None:
            for name, v in zip(cols, x):
                out.write(f"{name} {float(v)!r}\n")
    return status


def serve():
    for line in sys.stdin:
        parts = line.split()
        if not parts:
            continue
        try:
            status = solve(parts[0], parts[1], parts[2])
        except Exception as exc:  # report, keep serving
            with open(parts[1], "w") as out:
                out.write("#status error\n")
                out.write(f"#message {str(exc).replace(chr(10), ' ')}\n")
            status = "error"
        sys.stdout.write(f"done {status}\n")
        sys.stdout.flush()


def main(argv):
    if len(argv) == 2 and argv[1] == "--serve":
        serve()
        return 0
    if len(argv) != 4:
        sys.stderr.write(__doc__)
        return 2
    solve(argv[1], argv[2], argv[3])
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
