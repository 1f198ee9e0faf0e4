"""Clustering risk under the dimensionality-normalized norm, and its penalized form.

The dimensionality-normalized (dn) squared norm of a vector is its squared
Euclidean norm divided by its length, which makes residuals comparable
across column groups of different sizes. The risk of a biclustering state
is the average over rows of the smallest dn-squared distance between the
row's projection onto each column group and that group's center.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .matrix import DataMatrix, Partition, frobenius_sq

__all__ = [
    "CenterSet",
    "LossReport",
    "dn_norm_sq",
    "center_distances",
    "empirical_risk",
    "risk_assignments",
    "assignment_risk",
    "penalized_loss",
]


class CenterSet:
    """k cluster centers; center j lives on column group j of a fixed partition.

    The column partition the centers were built against is kept so that
    mismatched use is rejected instead of silently producing garbage.
    """

    __slots__ = ("_centers", "_col_partition")

    def __init__(self, centers: Sequence, col_partition: Partition) -> None:
        cents = []
        for c in centers:
            arr = np.array(c, dtype=np.float64)
            if arr.ndim != 1 or arr.size < 1:
                raise ValueError("each center must be a nonempty 1-D vector")
            arr.setflags(write=False)
            cents.append(arr)
        if len(cents) != col_partition.k:
            raise ValueError(f"expected {col_partition.k} centers, got {len(cents)}")
        sizes = col_partition.cluster_sizes()
        for j, arr in enumerate(cents):
            if arr.size != sizes[j]:
                raise ValueError(
                    f"center {j + 1} has length {arr.size}, but column group {j + 1} "
                    f"has {sizes[j]} columns"
                )
        self._centers = tuple(cents)
        self._col_partition = col_partition

    @property
    def centers(self) -> tuple[np.ndarray, ...]:
        return self._centers

    @property
    def col_partition(self) -> Partition:
        return self._col_partition

    @property
    def k(self) -> int:
        return len(self._centers)

    def center(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.k:
            raise ValueError(f"cluster label must lie in 1..{self.k}, got {j}")
        return self._centers[j - 1]

    def __repr__(self) -> str:
        lens = [c.size for c in self._centers]
        return f"CenterSet(k={self.k}, lengths={lens})"


@dataclass(frozen=True)
class LossReport:
    """Risk plus penalty breakdown for one biclustering state.

    noise_bicluster is the cluster exempted from the penalty (None when
    lam == 0, where no penalty is computed at all).
    """

    risk: float
    penalty: float
    total: float
    lam: float
    noise_bicluster: Optional[int]


def dn_norm_sq(v, l: int | None = None) -> float:
    """Squared dn norm of v: (sum of squared entries) / l, with l = len(v)."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("dn_norm_sq expects a nonempty 1-D vector")
    if l is None:
        l = arr.size
    if int(l) != arr.size:
        raise ValueError(f"l={l} must equal the vector length {arr.size}")
    return float((arr * arr).sum() / arr.size)


def _check_centers(X: DataMatrix, I: Partition, c: CenterSet) -> None:
    if I.size != X.n_cols:
        raise ValueError(f"column partition covers {I.size} columns, matrix has {X.n_cols}")
    if c.col_partition != I:
        raise ValueError("centers were built against a different column partition")


def center_distances(X: DataMatrix, I: Partition, c: CenterSet) -> np.ndarray:
    """(n, k) matrix of dn-squared distances from each row to each center."""
    _check_centers(X, I, c)
    V = X.values
    D = np.empty((X.n_rows, I.k), dtype=np.float64)
    for j, idx in enumerate(I.groups()):
        diff = V[:, idx] - c.centers[j]
        D[:, j] = (diff * diff).sum(axis=1) / idx.size
    return D


def empirical_risk(X: DataMatrix, I: Partition, c: CenterSet) -> float:
    """Average over rows of the smallest dn-squared distance to any center."""
    D = center_distances(X, I, c)
    return float(D.min(axis=1).mean())


def risk_assignments(X: DataMatrix, I: Partition, c: CenterSet) -> tuple[float, np.ndarray]:
    """Risk together with the per-row argmin labels (ties to the lowest label)."""
    D = center_distances(X, I, c)
    labels = D.argmin(axis=1).astype(np.int64) + 1
    return float(D.min(axis=1).mean()), labels


def assignment_risk(X: DataMatrix, J: Partition, I: Partition, c: CenterSet) -> float:
    """Risk when each row is charged to its assigned cluster instead of the argmin.

    For fixed assignments this is the objective that the per-cluster mean
    minimizes over centers.
    """
    _check_centers(X, I, c)
    if J.size != X.n_rows:
        raise ValueError(f"row partition covers {J.size} rows, matrix has {X.n_rows}")
    if J.k != I.k:
        raise ValueError(f"row partition has k={J.k}, column partition has k={I.k}")
    V = X.values
    total = 0.0
    for j in range(J.k):
        rows = J.groups()[j]
        cols = I.groups()[j]
        diff = V[np.ix_(rows, cols)] - c.centers[j]
        total += float((diff * diff).sum() / cols.size)
    return total / X.n_rows


def penalized_loss(
    X: DataMatrix, J: Partition, I: Partition, c: CenterSet, lam: float
) -> LossReport:
    """Risk plus lam-weighted penalties pushing biclusters toward strong entries.

    Each non-noise bicluster j contributes lam * F(X) / (F(X^(j)) + 1), with
    F the squared Frobenius norm and X^(j) the submatrix of rows and columns
    in bicluster j. One bicluster is exempt: the one with the smallest
    submatrix norm (ties to the lowest label), so the exemption absorbs the
    largest would-be penalty and the leftover low-magnitude entries can live
    there as noise. With lam = 0 the penalty machinery is skipped entirely.
    """
    lam = float(lam)
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if J.k != I.k:
        raise ValueError(f"row partition has k={J.k}, column partition has k={I.k}")
    if J.size != X.n_rows:
        raise ValueError(f"row partition covers {J.size} rows, matrix has {X.n_rows}")
    risk = empirical_risk(X, I, c)
    if lam == 0.0:
        return LossReport(risk=risk, penalty=0.0, total=risk, lam=0.0, noise_bicluster=None)
    V = X.values
    block_norms = [
        float((V[np.ix_(rows, cols)] ** 2).sum())
        for rows, cols in zip(J.groups(), I.groups())
    ]
    noise = int(np.argmin(block_norms)) + 1
    frob_x = frobenius_sq(X)
    penalty = lam * sum(
        frob_x / (block_norms[j] + 1.0) for j in range(J.k) if j + 1 != noise
    )
    return LossReport(
        risk=risk, penalty=penalty, total=risk + penalty, lam=lam, noise_bicluster=noise
    )
