#!/usr/bin/env python3
"""Freezes reference values used by the C++ tests.

Run from the repository root; writes JSON next to this script. The alpha
values come from a pairwise-disagreement formulation (no coincidence matrix),
the t-tests and rank correlations from scipy.
"""
import itertools
import json
import math
import pathlib

import numpy as np
from scipy import stats

HERE = pathlib.Path(__file__).resolve().parent


def delta2(a, b, level, counts):
    if a == b:
        return 0.0
    if level == "nominal":
        return 1.0
    if level == "interval":
        return float((a - b) ** 2)
    lo, hi = min(a, b), max(a, b)
    s = sum(counts.get(g, 0) for g in range(lo, hi + 1)) - (counts[lo] + counts[hi]) / 2.0
    return s * s


def alpha_pairwise(units, level):
    values = [v for u in units for v in u]
    n = len(values)
    counts = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    d_o = sum(2.0 * delta2(a, b, level, counts) for a, b in units) / n
    d_e = sum(delta2(values[i], values[j], level, counts)
              for i in range(n) for j in range(n) if i != j) / (n * (n - 1))
    return None if d_e == 0 else 1.0 - d_o / d_e


ALPHA_FIXTURES = [
    ("small_interval", [(1, 1), (2, 3), (3, 3), (4, 2), (5, 5), (6, 7), (7, 6)]),
    ("likert_mixed", [(5, 6), (5, 5), (4, 6), (7, 7), (2, 4), (3, 3), (6, 5), (1, 2), (4, 4), (6, 7), (5, 3)]),
    ("three_categories", [(0, 0), (0, 1), (1, 1), (2, 2), (2, 0), (1, 1), (0, 0), (2, 2), (1, 2)]),
]


def alpha_file():
    out = []
    for name, units in ALPHA_FIXTURES:
        entry = {"name": name, "units": [list(u) for u in units]}
        for level in ("nominal", "ordinal", "interval"):
            entry[level] = alpha_pairwise(units, level)
        out.append(entry)
    return out


def ttest_file():
    rng = np.random.default_rng(20240611)
    out = []
    for i in range(10):
        n = int(rng.integers(5, 40))
        a = np.round(rng.normal(1.2, 0.8, n), 3)
        b = np.round(a + rng.normal(0.15 * (i % 3 - 1), 0.5, n), 3)
        res = stats.ttest_rel(a, b)
        out.append({"a": a.tolist(), "b": b.tolist(), "t": float(res.statistic), "p": float(res.pvalue)})
    return out


def spearman_file():
    rng = np.random.default_rng(7)
    out = []
    for _ in range(5):
        n = int(rng.integers(6, 30))
        x = rng.integers(1, 8, n).astype(float)
        y = np.round(x + rng.normal(0, 1.5, n))
        out.append({"x": x.tolist(), "y": y.tolist(), "rho": float(stats.spearmanr(x, y).statistic)})
    return out


def kernels_file():
    # Local kernel between (0,0) and (1,0) with unit bandwidth, and the GAK of
    # two short sequences by explicit path enumeration.
    k = math.exp(-0.5)
    local = k / (2.0 - k)

    def kappa(p, q, sigma):
        d2 = sum((u - v) ** 2 for u, v in zip(p, q))
        kk = math.exp(-d2 / (2 * sigma * sigma))
        return kk / (2 - kk)

    def paths(n, m):
        def rec(i, j):
            if i == n - 1 and j == m - 1:
                yield [(i, j)]
                return
            for di, dj in ((1, 0), (0, 1), (1, 1)):
                if i + di < n and j + dj < m:
                    for rest in rec(i + di, j + dj):
                        yield [(i, j)] + rest
        return list(rec(0, 0))

    x = [[0.0, 0.5], [1.0, -0.25], [0.3, 0.3]]
    y = [[0.2, 0.1], [0.9, 0.0]]
    total = sum(math.prod(kappa(x[i], y[j], 0.7) for i, j in p) for p in paths(3, 2))
    return {"local_unit": local, "gak_x": x, "gak_y": y, "gak_sigma": 0.7, "gak_value": total,
            "delannoy_3_2": len(paths(3, 2))}


def main():
    for name, payload in (("alpha.json", alpha_file()), ("ttest.json", ttest_file()),
                          ("spearman.json", spearman_file()), ("kernels.json", kernels_file())):
        (HERE / name).write_text(json.dumps(payload, indent=1) + "\n")


if __name__ == "__main__":
    main()
