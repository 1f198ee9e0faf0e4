"""Independent brute-force oracles used by the test suite.

These deliberately avoid the package's own code paths: risks are computed by
exhaustive enumeration, rates by enumerating label permutations and counting
entries directly.
"""

from itertools import permutations

import numpy as np


def enumerate_best_risk(V: np.ndarray) -> float:
    """Exact minimum of the k=2 clustering risk by full enumeration.

    All nonempty column bipartitions are paired with all nonempty ordered row
    assignments; centers are the exact per-cluster means and states are
    scored with the argmin rule, which covers the optimum over centers.
    """
    V = np.asarray(V, dtype=np.float64)
    n, m = V.shape
    row_masks = np.array(
        [[(s >> i) & 1 for i in range(n)] for s in range(1, 2**n - 1)], dtype=bool
    )
    counts1 = row_masks.sum(axis=1)
    counts2 = n - counts1
    best = np.inf
    for cols in range(1, 2**m - 1, 2):  # bit 0 set: each unordered bipartition once
        sel = np.array([(cols >> j) & 1 for j in range(m)], dtype=bool)
        V1, V2 = V[:, sel], V[:, ~sel]
        l1, l2 = V1.shape[1], V2.shape[1]
        c1 = (row_masks @ V1) / counts1[:, None]
        c2 = (~row_masks @ V2) / counts2[:, None]
        d1 = ((V1[None, :, :] - c1[:, None, :]) ** 2).sum(axis=2) / l1
        d2 = ((V2[None, :, :] - c2[:, None, :]) ** 2).sum(axis=2) / l2
        risks = np.minimum(d1, d2).mean(axis=1)
        best = min(best, float(risks.min()))
    return best


def brute_sample_rate(pred, true) -> float:
    pred = np.asarray(pred, dtype=np.int64)
    true = np.asarray(true, dtype=np.int64)
    K = int(max(pred.max(), true.max()))
    best = pred.size
    for perm in permutations(range(1, K + 1)):
        mapped = np.array([perm[p - 1] for p in pred])
        best = min(best, int((mapped != true).sum()))
    return best / pred.size


def brute_entry_rate(pred_rows, pred_cols, true_rows, true_cols) -> float:
    """Minimum fraction of wrong entries over all (row perm, column perm) pairs."""
    pr = np.asarray(pred_rows, dtype=np.int64)
    pc = np.asarray(pred_cols, dtype=np.int64)
    tr = np.asarray(true_rows, dtype=np.int64)
    tc = np.asarray(true_cols, dtype=np.int64)
    Kr = int(max(pr.max(), tr.max()))
    Kc = int(max(pc.max(), tc.max()))
    n, m = pr.size, pc.size
    best = n * m
    for perm_r in permutations(range(1, Kr + 1)):
        wrong_r = np.array([perm_r[p - 1] for p in pr]) != tr
        for perm_c in permutations(range(1, Kc + 1)):
            wrong_c = np.array([perm_c[p - 1] for p in pc]) != tc
            wrong = int((wrong_r[:, None] | wrong_c[None, :]).sum())
            best = min(best, wrong)
    return best / (n * m)


def two_block_matrix(n: int, hi: float = 5.0, lo: float = 3.0) -> np.ndarray:
    """Noiseless block-diagonal matrix: first half rows/cols hi, second half lo."""
    if n % 2 != 0:
        raise ValueError("n must be even")
    half = n // 2
    V = np.zeros((n, n))
    V[:half, :half] = hi
    V[half:, half:] = lo
    return V
