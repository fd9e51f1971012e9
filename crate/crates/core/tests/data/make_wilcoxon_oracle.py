"""Freezes reference p-values for the signed-rank test.

Small samples: brute-force enumeration of all 2^n sign assignments of the
average ranks. Large samples: scipy's normal approximation with tie and
continuity correction.
"""
import itertools
import json

import numpy as np
import scipy
from scipy.stats import rankdata, wilcoxon


def brute_p(d):
    d = d[d != 0]
    r = rankdata(np.abs(d))
    w = r[d > 0].sum()
    n = len(r)
    signs = np.array(list(itertools.product([0, 1], repeat=n)), dtype=float)
    sums = signs @ r
    lo = np.mean(sums <= w + 1e-9)
    hi = np.mean(sums >= w - 1e-9)
    return min(1.0, 2 * min(lo, hi))


rng = np.random.default_rng(20240601)
cases = []
for k in range(20):
    large = k >= 12
    n = int(rng.integers(30, 60)) if large else int(rng.integers(6, 19))
    shift = rng.choice([0.0, 0.02, 0.05, -0.04])
    a = np.round(rng.normal(0.5, 0.05, n), 2)
    b = np.round(a - shift + rng.normal(0, 0.04, n), 2)
    zeros = rng.choice(n, size=int(rng.integers(0, 3)), replace=False)
    b[zeros] = a[zeros]
    d = a - b
    if large:
        res = wilcoxon(a, b, zero_method="wilcox", correction=True, method="approx")
        p = float(res.pvalue)
        source = f"scipy {scipy.__version__} approx"
    else:
        p = brute_p(d)
        source = "enumeration"
    cases.append({"a": a.tolist(), "b": b.tolist(), "p": p, "nonzero": int((d != 0).sum()), "source": source})
with open("wilcoxon_oracle.json", "w") as f:
    json.dump(cases, f, indent=1)
for c in cases:
    print(c["nonzero"], c["source"], c["p"])
