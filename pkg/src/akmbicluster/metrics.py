"""Misclassification rates with label alignment, and the loss-vs-k elbow curve.

Predicted cluster labels are arbitrary, so rates are computed under the best
relabeling of the predictions. Row labels and column labels are aligned
independently: the generating model draws row and column classes separately,
so there is no canonical pairing between a row class and a column class, and
a result that groups rows and columns perfectly should score zero no matter
which row group shares a bicluster index with which column group.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .engine import AkmConfig, FitFailedError, akm_fit
from .matrix import DataMatrix, Partition
from .seeds import derive_seed

__all__ = [
    "LabelAlignment",
    "align_labels",
    "sample_misclassification_rate",
    "entry_misclassification_rate",
    "ElbowCurve",
    "elbow_curve",
]

# k! alignments are searched exhaustively up to this k; beyond it a greedy
# largest-overlap matching is used and a warning is emitted.
EXHAUSTIVE_ALIGNMENT_LIMIT = 8

_STREAM_ELBOW = 21


@dataclass(frozen=True)
class LabelAlignment:
    """Best relabeling of predicted labels onto true labels.

    mapping[p - 1] is the true label assigned to predicted label p. exact is
    False when the greedy fallback was used instead of the exhaustive search.
    """

    mapping: tuple[int, ...]
    achieved_rate: float
    exact: bool


def _labels_of(x) -> np.ndarray:
    if isinstance(x, Partition):
        return x.labels
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("labels must form a nonempty 1-D sequence")
    if arr.min() < 1:
        raise ValueError("labels must be 1-based positive integers")
    return arr


def _best_alignment(pred: np.ndarray, true: np.ndarray) -> tuple[tuple[int, ...], int, bool]:
    """(mapping, misassigned count, exact?) for the best permutation.

    The permutation acts on labels 1..K with K = max label seen on either
    side; predicted labels mapped onto true labels that never occur count all
    their members as errors.
    """
    if pred.size != true.size:
        raise ValueError(f"predicted {pred.size} labels but truth has {true.size}")
    K = int(max(pred.max(), true.max()))
    C = np.zeros((K, K), dtype=np.int64)
    np.add.at(C, (pred - 1, true - 1), 1)
    if K <= EXHAUSTIVE_ALIGNMENT_LIMIT:
        rows = np.arange(K)
        best_correct = -1
        best_perm: tuple[int, ...] | None = None
        for perm in permutations(range(K)):
            correct = int(C[rows, perm].sum())
            if correct > best_correct:
                best_correct = correct
                best_perm = perm
        mapping = tuple(t + 1 for t in best_perm)
        return mapping, pred.size - best_correct, True
    warnings.warn(
        f"{K} labels exceed the exhaustive alignment limit "
        f"({EXHAUSTIVE_ALIGNMENT_LIMIT}); using greedy largest-overlap matching",
        stacklevel=3,
    )
    work = C.copy()
    assigned: dict[int, int] = {}
    free_pred = set(range(K))
    free_true = set(range(K))
    for _ in range(K):
        best = (-1, None, None)
        for p in sorted(free_pred):
            for t in sorted(free_true):
                if work[p, t] > best[0]:
                    best = (int(work[p, t]), p, t)
        _, p, t = best
        assigned[p] = t
        free_pred.remove(p)
        free_true.remove(t)
    mapping = tuple(assigned[p] + 1 for p in range(K))
    correct = int(sum(C[p, assigned[p]] for p in range(K)))
    return mapping, pred.size - correct, False


def align_labels(pred_labels, true_labels) -> LabelAlignment:
    pred = _labels_of(pred_labels)
    true = _labels_of(true_labels)
    mapping, wrong, exact = _best_alignment(pred, true)
    return LabelAlignment(mapping=mapping, achieved_rate=wrong / pred.size, exact=exact)


def sample_misclassification_rate(pred_rows, true_rows) -> float:
    """Fraction of rows in the wrong cluster under the best relabeling."""
    pred = _labels_of(pred_rows)
    true = _labels_of(true_rows)
    _, wrong, _ = _best_alignment(pred, true)
    return wrong / pred.size


def entry_misclassification_rate(pred_rows, pred_cols, true_rows, true_cols) -> float:
    """Fraction of matrix entries whose row or column is misclustered.

    An entry (i, j) counts as wrong when row i is misassigned under the best
    row relabeling or column j is misassigned under the best column
    relabeling. With wr wrong rows and wc wrong columns out of n and m, the
    wrong-entry count is wr*m + wc*n - wr*wc.
    """
    pr = _labels_of(pred_rows)
    pc = _labels_of(pred_cols)
    tr = _labels_of(true_rows)
    tc = _labels_of(true_cols)
    _, wrong_rows, _ = _best_alignment(pr, tr)
    _, wrong_cols, _ = _best_alignment(pc, tc)
    n, m = pr.size, pc.size
    wrong_entries = wrong_rows * m + wrong_cols * n - wrong_rows * wrong_cols
    return wrong_entries / (n * m)


@dataclass(frozen=True)
class ElbowCurve:
    """Best unpenalized loss per cluster count, for elbow-style selection of k.

    k values whose fit failed outright are listed in failed_k and carry no
    loss entry.
    """

    k_values: tuple[int, ...]
    losses: tuple[float, ...]
    restarts: tuple[int, ...]
    seeds: tuple[int, ...]
    failed_k: tuple[int, ...] = ()


def elbow_curve(
    X: DataMatrix,
    k_min: int,
    k_max: int,
    restarts: int = 20,
    seed: int = 0,
    trace_sink: list | None = None,
) -> ElbowCurve:
    """Fit with lam = 0 for each k in k_min..k_max and record the best loss.

    Each k gets its own derived seed, so any single point of the curve can be
    reproduced by a standalone fit with that seed.
    """
    if not 1 <= k_min <= k_max:
        raise ValueError(f"need 1 <= k_min <= k_max, got {k_min}..{k_max}")
    if k_max > min(X.n_rows, X.n_cols):
        raise ValueError(f"k_max={k_max} exceeds min(n, m)={min(X.n_rows, X.n_cols)}")
    k_values: list[int] = []
    losses: list[float] = []
    seeds: list[int] = []
    failed: list[int] = []
    for k in range(k_min, k_max + 1):
        k_seed = derive_seed(seed, _STREAM_ELBOW, k)
        cfg = AkmConfig(k=k, lam=0.0, restarts=restarts, seed=k_seed)
        try:
            result = akm_fit(X, cfg, trace_sink=trace_sink)
        except FitFailedError:
            failed.append(k)
            continue
        k_values.append(k)
        losses.append(result.loss.total)
        seeds.append(k_seed)
    return ElbowCurve(
        k_values=tuple(k_values),
        losses=tuple(losses),
        restarts=tuple(restarts for _ in k_values),
        seeds=tuple(seeds),
        failed_k=tuple(failed),
    )
