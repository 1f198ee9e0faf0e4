"""Dense matrix, index-set, and partition types shared across the package.

Indices are 1-based in all public interfaces; 0-based positions are used
internally for numpy work. All types are immutable after construction.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DataMatrix",
    "IndexSet",
    "Partition",
    "project",
    "transpose",
    "frobenius_sq",
    "submatrix",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class DataMatrix:
    """An n x m matrix of finite reals; rows are data points, columns features."""

    __slots__ = ("_values",)

    def __init__(self, values) -> None:
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got {arr.ndim}-D data")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"matrix must have at least one row and one column, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite (NaN/Inf rejected)")
        self._values = _readonly(arr)

    @classmethod
    def _wrap(cls, validated: np.ndarray) -> "DataMatrix":
        # Fast path for arrays already known to satisfy the invariants.
        out = object.__new__(cls)
        out._values = _readonly(validated)
        return out

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n_rows(self) -> int:
        return self._values.shape[0]

    @property
    def n_cols(self) -> int:
        return self._values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    def transpose(self) -> "DataMatrix":
        return DataMatrix._wrap(self._values.T)

    def __repr__(self) -> str:
        return f"DataMatrix(shape={self.n_rows}x{self.n_cols})"


class IndexSet:
    """Strictly increasing 1-based indices into one axis of length `bound`."""

    __slots__ = ("_indices", "_bound", "_positions")

    def __init__(self, indices: Iterable[int], bound: int) -> None:
        idx = tuple(int(i) for i in indices)
        bound = int(bound)
        if bound < 1:
            raise ValueError("axis bound must be at least 1")
        if not idx:
            raise ValueError("index set must be nonempty")
        if idx[0] < 1 or idx[-1] > bound:
            raise ValueError(f"indices must lie in 1..{bound}, got range {idx[0]}..{idx[-1]}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("indices must be strictly increasing")
        self._indices = idx
        self._bound = bound
        self._positions = _readonly(np.asarray(idx, dtype=np.intp) - 1)

    @property
    def indices(self) -> tuple[int, ...]:
        return self._indices

    @property
    def bound(self) -> int:
        return self._bound

    @property
    def positions(self) -> np.ndarray:
        """0-based positions, for numpy indexing."""
        return self._positions

    def __len__(self) -> int:
        return len(self._indices)

    def __iter__(self):
        return iter(self._indices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self._bound == other._bound and self._indices == other._indices

    def __hash__(self) -> int:
        return hash((self._bound, self._indices))

    def __repr__(self) -> str:
        return f"IndexSet({list(self._indices)}, bound={self._bound})"


class Partition:
    """Assignment of a ground set into k labeled clusters, labels in 1..k.

    Every label in 1..k occurs at least once (clusters are nonempty,
    exclusive, and exhaustive).
    """

    __slots__ = ("_labels", "_k", "_groups")

    def __init__(self, labels, k: int | None = None) -> None:
        lab = np.array(labels, dtype=np.int64)
        if lab.ndim != 1 or lab.size < 1:
            raise ValueError("labels must be a nonempty 1-D sequence")
        if k is None:
            k = int(lab.max())
        k = int(k)
        if k < 1:
            raise ValueError("cluster count k must be positive")
        lo, hi = int(lab.min()), int(lab.max())
        if lo < 1 or hi > k:
            raise ValueError(f"labels must lie in 1..{k}, got range {lo}..{hi}")
        counts = np.bincount(lab, minlength=k + 1)[1:]
        if (counts == 0).any():
            missing = int(np.flatnonzero(counts == 0)[0]) + 1
            raise ValueError(f"every cluster in 1..{k} must be nonempty; cluster {missing} is unused")
        self._labels = _readonly(lab)
        self._k = k
        self._groups: list[np.ndarray] | None = None

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def k(self) -> int:
        return self._k

    @property
    def size(self) -> int:
        return self._labels.size

    def groups(self) -> list[np.ndarray]:
        """0-based member positions of clusters 1..k, each sorted ascending."""
        if self._groups is None:
            self._groups = [
                _readonly(np.flatnonzero(self._labels == j)) for j in range(1, self._k + 1)
            ]
        return self._groups

    def group(self, j: int) -> np.ndarray:
        if not 1 <= j <= self._k:
            raise ValueError(f"cluster label must lie in 1..{self._k}, got {j}")
        return self.groups()[j - 1]

    def index_set(self, j: int) -> IndexSet:
        return IndexSet(self.group(j) + 1, self.size)

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self._labels, minlength=self._k + 1)[1:]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self._k == other._k and np.array_equal(self._labels, other._labels)

    __hash__ = None  # mutable-feeling equality; not intended as a dict key

    def __repr__(self) -> str:
        return f"Partition(k={self._k}, size={self.size})"


def project(x, idx: IndexSet) -> np.ndarray:
    """Subvector of x at the 1-based positions in idx, preserving index order."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("project expects a 1-D vector")
    if arr.size != idx.bound:
        raise ValueError(f"vector length {arr.size} does not match index-set bound {idx.bound}")
    return arr[idx.positions]


def transpose(X: DataMatrix) -> DataMatrix:
    return X.transpose()


def frobenius_sq(X) -> float:
    """Sum of squared entries of a matrix (square of the Frobenius norm)."""
    arr = X.values if isinstance(X, DataMatrix) else np.asarray(X, dtype=np.float64)
    return float((arr * arr).sum())


def submatrix(X: DataMatrix, rows: IndexSet, cols: IndexSet) -> np.ndarray:
    """The |rows| x |cols| submatrix of X, preserving index order."""
    if rows.bound != X.n_rows:
        raise ValueError(f"row index-set bound {rows.bound} does not match matrix rows {X.n_rows}")
    if cols.bound != X.n_cols:
        raise ValueError(f"column index-set bound {cols.bound} does not match matrix columns {X.n_cols}")
    return X.values[np.ix_(rows.positions, cols.positions)]
