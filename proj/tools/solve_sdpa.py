#!/usr/bin/env python3
"""Independent check of exported SDPA sparse files.

Parses a .dat-s file, rebuilds the problem with cvxpy and solves it with an
unrelated interior-point implementation (CLARABEL, falling back to SCS).
Prints the objective in the exporter's internal convention (a maximization;
the SDPA file itself carries the negated objective).

Usage: solve_sdpa.py FILE [FILE...]  [--json]
"""

import json
import sys

import numpy as np


def parse_sdpa(path):
    nvars = nblocks = None
    sizes = None
    cvec = None
    entries = []
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line or line[0] in "*\"":
                continue
            line = line.replace(",", " ").replace("{", " ").replace("}", " ")
            parts = line.split()
            if nvars is None:
                nvars = int(parts[0])
            elif nblocks is None:
                nblocks = int(parts[0])
            elif sizes is None:
                sizes = [int(x) for x in parts]
                assert len(sizes) == nblocks, "block size count mismatch"
            elif cvec is None:
                cvec = [float(x) for x in parts]
                assert len(cvec) == nvars, "objective length mismatch"
            else:
                matno, blk, i, j = (int(x) for x in parts[:4])
                entries.append((matno, blk, i, j, float(parts[4])))
    return nvars, sizes, np.array(cvec), entries


def solve(path, solver=None):
    import cvxpy as cp

    nvars, sizes, cvec, entries = parse_sdpa(path)
    x = cp.Variable(nvars)
    cons = []
    for b, size in enumerate(sizes, start=1):
        blk = [e for e in entries if e[1] == b]
        if size > 0:
            f0 = np.zeros((size, size))
            coeff = {}
            for matno, _, i, j, v in blk:
                m = coeff.setdefault(matno, np.zeros((size, size)))
                m[i - 1, j - 1] += v
                if i != j:
                    m[j - 1, i - 1] += v
            expr = -coeff.get(0, f0)
            for matno, m in coeff.items():
                if matno > 0:
                    expr = expr + x[matno - 1] * m
            cons.append(expr >> 0)
        else:
            d = -size
            f0 = np.zeros(d)
            coeff = {}
            for matno, _, i, j, v in blk:
                assert i == j, "off-diagonal entry in a diagonal block"
                vec = coeff.setdefault(matno, np.zeros(d))
                vec[i - 1] += v
            expr = -coeff.get(0, f0)
            for matno, vec in coeff.items():
                if matno > 0:
                    expr = expr + x[matno - 1] * vec
            cons.append(expr >= 0)
    prob = cp.Problem(cp.Minimize(cvec @ x), cons)
    solvers = [solver] if solver else ["CLARABEL", "SCS"]
    last_exc = None
    for sv in solvers:
        try:
            kw = {}
            if sv == "SCS":
                kw = dict(eps=1e-9, max_iters=200000)
            prob.solve(solver=sv, **kw)
            if prob.value is not None:
                # internal convention: maximize -(sdpa objective)
                return -prob.value, prob.status, sv
        except Exception as exc:  # noqa: BLE001 - try the next solver
            last_exc = exc
    raise RuntimeError(f"no solver succeeded: {last_exc}")


def main(argv):
    as_json = "--json" in argv
    paths = [a for a in argv if not a.startswith("--")]
    out = {}
    for path in paths:
        value, status, solver = solve(path)
        out[path] = {"objective": value, "status": status, "solver": solver}
        if not as_json:
            print(f"{path}: objective={value:.12g} status={status} solver={solver}")
    if as_json:
        print(json.dumps(out, indent=1))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
