#!/usr/bin/env python3
"""Solve a sparse SDPA file written by `bellcpt npa-export`.

The problem  min c.x  s.t.  sum_k F_k x_k - F_0 >= 0  is handed to Clarabel (or SCS)
in triangle-vectorized form. Prints the SDPA optimum and the Bell value (its
negative) as one JSON object.
"""
import argparse
import json
import math
import re
import sys

import numpy as np
import scipy.sparse as sp


def read_sdpa(path):
    comments, tokens = [], []
    with open(path) as f:
        header = True
        for line in f:
            if header and line[:1] in ("*", '"'):
                comments.append(line[1:].rstrip("\n"))
                continue
            header = False
            tokens += re.sub(r"[,{}()]", " ", line).split()
    pos = 0
    m = int(tokens[pos]); pos += 1
    nb = int(tokens[pos]); pos += 1
    blocks = [int(t) for t in tokens[pos:pos + nb]]; pos += nb
    c = np.array([float(t) for t in tokens[pos:pos + m]]); pos += m
    entries = []
    while pos < len(tokens):
        k, b, i, j = (int(t) for t in tokens[pos:pos + 4])
        entries.append((k, b, i, j, float(tokens[pos + 4])))
        pos += 5
    return comments, m, blocks, c, entries


def triangle_index(i, j, n, lower):
    # 0-based, i <= j for the upper form
    if i > j:
        i, j = j, i
    if lower:
        # SCS: lower triangle by columns, i.e. (row j, col i)
        return i * n - i * (i - 1) // 2 + (j - i)
    return j * (j + 1) // 2 + i


def build(m, blocks, entries, lower):
    offsets, sizes, total = [], [], 0
    for size in blocks:
        n = abs(size)
        offsets.append(total)
        sizes.append(n)
        total += n * (n + 1) // 2 if size > 0 else n
    rows, cols, vals = [], [], []
    b = np.zeros(total)
    seen = {}
    for k, blk, i, j, v in entries:
        n = sizes[blk - 1]
        if blocks[blk - 1] > 0:
            r = offsets[blk - 1] + triangle_index(i - 1, j - 1, n, lower)
            scale = 1.0 if i == j else math.sqrt(2.0)
        else:
            if i != j:
                continue
            r = offsets[blk - 1] + i - 1
            scale = 1.0
        key = (k, r)
        if key in seen:
            continue
        seen[key] = True
        if k == 0:
            b[r] -= scale * v
        else:
            rows.append(r); cols.append(k - 1); vals.append(-scale * v)
    a = sp.csc_matrix((vals, (rows, cols)), shape=(total, m))
    return a, b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("file")
    ap.add_argument("--solver", default="clarabel", choices=["clarabel", "scs"])
    ap.add_argument("--eps", type=float, default=1e-9)
    args = ap.parse_args(argv)

    comments, m, blocks, c, entries = read_sdpa(args.file)
    if args.solver == "clarabel":
        import clarabel
        a, b = build(m, blocks, entries, lower=False)
        cones = [clarabel.PSDTriangleConeT(abs(s)) if s > 0 else clarabel.NonnegativeConeT(-s) for s in blocks]
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        settings.tol_gap_abs = args.eps
        settings.tol_gap_rel = args.eps
        settings.tol_feas = args.eps
        sol = clarabel.DefaultSolver(sp.csc_matrix((m, m)), c, a, b, cones, settings).solve()
        status, value = str(sol.status), sol.obj_val
        ok = status in ("Solved", "AlmostSolved")
    else:
        import scs
        if any(s < 0 for s in blocks):
            # SCS orders linear cones first; keep the single-block case simple
            raise SystemExit("scs path supports positive blocks only")
        a, b = build(m, blocks, entries, lower=True)
        data = {"A": a, "b": b, "c": c}
        cone = {"s": [abs(s) for s in blocks]}
        sol = scs.SCS(data, cone, eps_abs=args.eps, eps_rel=args.eps, verbose=False).solve()
        status, value = sol["info"]["status"], sol["info"]["pobj"]
        ok = status in ("solved", "solved_inaccurate")
    out = {"status": status, "optimum": value, "bell_value": -value, "solver": args.solver,
           "header": comments[0].strip() if comments else ""}
    json.dump(out, sys.stdout)
    sys.stdout.write("\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
