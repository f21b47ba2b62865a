"""Golden-section search run in lockstep over several independent brackets."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_lockstep(
    evaluate: Callable[[np.ndarray], np.ndarray],
    lo,
    hi,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[np.ndarray, np.ndarray]:
    """Minimize ``k`` unimodal functions on ``[lo[i], hi[i]]`` simultaneously.

    ``evaluate(xs)`` receives one abscissa per search and returns the ``k``
    objective values, so every iteration costs a single vectorized call.
    A search stops shrinking once its bracket is below
    ``rtol * (|x1| + |x2|)``; the endpoints are compared as well.
    """
    a = np.array(lo, dtype=float, ndmin=1)
    c = np.array(hi, dtype=float, ndmin=1)
    x1 = c - INV_PHI * (c - a)
    x2 = a + INV_PHI * (c - a)
    f1 = np.asarray(evaluate(x1), dtype=float)
    f2 = np.asarray(evaluate(x2), dtype=float)
    for _ in range(max_iter):
        active = np.abs(c - a) > rtol * (np.abs(x1) + np.abs(x2))
        if not active.any():
            break
        left = (f1 < f2) & active  # minimum lies in [a, x2]
        right = ~left & active
        c = np.where(left, x2, c)
        a = np.where(right, x1, a)
        new_x2 = np.where(left, x1, x2)
        new_f2 = np.where(left, f1, f2)
        new_x1 = np.where(right, x2, x1)
        new_f1 = np.where(right, f2, f1)
        x1 = np.where(left, c - INV_PHI * (c - a), new_x1)
        x2 = np.where(right, a + INV_PHI * (c - a), new_x2)
        probe = np.where(left, x1, x2)
        fp = np.asarray(evaluate(probe), dtype=float)
        f1 = np.where(left, fp, new_f1)
        f2 = np.where(right, fp, new_f2)
    cand_x = np.stack([x1, x2, np.array(lo, dtype=float, ndmin=1), np.array(hi, dtype=float, ndmin=1)])
    cand_f = np.stack([f1, f2, evaluate(cand_x[2]), evaluate(cand_x[3])])
    pick = np.argmin(cand_f, axis=0)
    idx = np.arange(a.size)
    return cand_x[pick, idx], cand_f[pick, idx]
