"""Alternating k-means biclustering.

A single run starts from separate Euclidean k-means on the rows and on the
columns, then alternates two Lloyd-style phases until neither partition
changes: a row phase (reassigning rows against centers defined on the
current column groups, distances under the dimensionality-normalized norm)
and a column phase (the same procedure on the transposed matrix). The run
returns the cheapest state recorded along the way: the initial separate
k-means state, each row-phase exit, and the converged state. Restarts rerun
everything on a freshly permuted copy of the matrix and the best restart
wins; lam influences only these comparisons, never the phase iterations
themselves.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kmeans import EmptyClusterError, KMeansConfig, lloyd_kmeans
from .loss import CenterSet, LossReport, center_distances, penalized_loss
from .matrix import DataMatrix, Partition
from .seeds import derive_seed, rng_from

__all__ = [
    "AkmConfig",
    "BiclusterResult",
    "PhaseResult",
    "RestartSummary",
    "RestartRequired",
    "FitFailedError",
    "SOURCE_SEPARATE_KMEANS",
    "SOURCE_ALTERNATING",
    "update_centers",
    "assign_rows",
    "row_phase",
    "column_phase",
    "akm_single_run",
    "akm_fit",
]

SOURCE_SEPARATE_KMEANS = "separate-kmeans"
SOURCE_ALTERNATING = "alternating"

# Stream tags for deriving independent per-purpose seeds from one master seed.
_STREAM_PERMUTATION = 1
_STREAM_RUN = 2
_STREAM_ROW_KMEANS = 3
_STREAM_COL_KMEANS = 4


class RestartRequired(RuntimeError):
    """An assignment step emptied a cluster; the current run must be abandoned."""


class FitFailedError(RuntimeError):
    """Every restart was aborted by empty clusters."""


@dataclass(frozen=True)
class AkmConfig:
    k: int
    lam: float = 0.0
    restarts: int = 1
    max_outer_iters: int = 100
    max_inner_iters: int = 100
    empty_cluster_retry_cap: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.max_outer_iters < 1 or self.max_inner_iters < 1:
            raise ValueError("iteration caps must be positive")
        if self.empty_cluster_retry_cap < 1:
            raise ValueError("empty_cluster_retry_cap must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class PhaseResult:
    partition: Partition
    centers: CenterSet
    risk: float
    trace: tuple[float, ...]


@dataclass(frozen=True)
class BiclusterResult:
    row_partition: Partition
    col_partition: Partition
    centers: CenterSet
    loss: LossReport
    restart_index: int
    outer_iterations: int
    source: str
    seed: int


@dataclass(frozen=True)
class RestartSummary:
    restart_index: int
    status: str  # "ok" or "skipped"
    retries: int
    total_loss: Optional[float]
    outer_iterations: Optional[int]
    source: Optional[str]


def _check_shapes(X: DataMatrix, J: Partition, I: Partition) -> None:
    if J.size != X.n_rows:
        raise ValueError(f"row partition covers {J.size} rows, matrix has {X.n_rows}")
    if I.size != X.n_cols:
        raise ValueError(f"column partition covers {I.size} columns, matrix has {X.n_cols}")
    if J.k != I.k:
        raise ValueError(f"row partition has k={J.k}, column partition has k={I.k}")


def update_centers(X: DataMatrix, J: Partition, I: Partition) -> CenterSet:
    """Per-cluster means of the assigned rows, each on its own column group."""
    _check_shapes(X, J, I)
    V = X.values
    centers = [
        V[np.ix_(rows, cols)].mean(axis=0) for rows, cols in zip(J.groups(), I.groups())
    ]
    return CenterSet(centers, I)


def assign_rows(X: DataMatrix, I: Partition, c: CenterSet) -> tuple[np.ndarray, bool]:
    """Argmin labels (1..k, ties to the lowest label) plus an empty-cluster flag.

    When the flag is set the labels do not form a valid Partition; callers
    follow the restart rule instead of continuing.
    """
    D = center_distances(X, I, c)
    labels = D.argmin(axis=1).astype(np.int64) + 1
    empty = bool((np.bincount(labels, minlength=I.k + 1)[1:] == 0).any())
    return labels, empty


def row_phase(
    X: DataMatrix,
    I: Partition,
    J_init: Partition,
    max_inner_iters: int = 100,
    trace_sink: list | None = None,
) -> PhaseResult:
    """Alternate center updates and row assignments until the labels settle.

    The returned risk is the empirical risk of the returned centers, and the
    returned partition is their argmin assignment. The per-iteration risk
    trace is non-increasing. Raises RestartRequired if an assignment empties
    a cluster.
    """
    _check_shapes(X, J_init, I)
    if max_inner_iters < 1:
        raise ValueError("max_inner_iters must be positive")
    k = I.k
    labels = J_init.labels
    trace: list[float] = []
    centers = None
    for _ in range(max_inner_iters):
        centers = update_centers(X, Partition(labels, k), I)
        D = center_distances(X, I, centers)
        new_labels = D.argmin(axis=1).astype(np.int64) + 1
        trace.append(float(D.min(axis=1).mean()))
        if (np.bincount(new_labels, minlength=k + 1)[1:] == 0).any():
            if trace_sink is not None:
                trace_sink.append(tuple(trace))
            raise RestartRequired("row assignment emptied a cluster")
        converged = np.array_equal(new_labels, labels)
        labels = new_labels
        if converged:
            break
    if trace_sink is not None:
        trace_sink.append(tuple(trace))
    return PhaseResult(
        partition=Partition(labels, k),
        centers=centers,
        risk=trace[-1],
        trace=tuple(trace),
    )


def column_phase(
    X: DataMatrix,
    J: Partition,
    I_init: Partition,
    max_inner_iters: int = 100,
    trace_sink: list | None = None,
) -> PhaseResult:
    """Row phase applied to the transpose: columns are reassigned, rows fixed.

    The returned partition is the new column partition of X; the centers are
    defined on the transposed matrix against the row partition J.
    """
    return row_phase(X.transpose(), J, I_init, max_inner_iters, trace_sink)


def _record_loss(X: DataMatrix, J: Partition, I: Partition, lam: float) -> tuple[CenterSet, LossReport]:
    c = update_centers(X, J, I)
    return c, penalized_loss(X, J, I, c, lam)


def akm_single_run(
    X: DataMatrix,
    cfg: AkmConfig,
    run_seed: int | None = None,
    trace_sink: list | None = None,
) -> BiclusterResult:
    """One full run on X as given (no permutation, no restarts).

    Raises RestartRequired/EmptyClusterError when an assignment step empties
    a cluster; the orchestrator handles those by restarting.
    """
    if cfg.k > min(X.n_rows, X.n_cols):
        raise ValueError(f"k={cfg.k} exceeds min(n, m)={min(X.n_rows, X.n_cols)}")
    if run_seed is None:
        run_seed = cfg.seed
    V = X.values
    J_init = lloyd_kmeans(V, KMeansConfig(k=cfg.k, seed=derive_seed(run_seed, _STREAM_ROW_KMEANS)))
    I_init = lloyd_kmeans(V.T, KMeansConfig(k=cfg.k, seed=derive_seed(run_seed, _STREAM_COL_KMEANS)))
    c_init, loss_init = _record_loss(X, J_init, I_init, cfg.lam)

    # Candidate states recorded during the alternation. The column phase
    # optimizes the transposed objective, so the loss is not monotone across
    # outer rounds and the converged state need not be the cheapest one seen;
    # every row-phase exit is a complete state and is kept as a candidate.
    best_alt: tuple[float, Partition, Partition] | None = None
    J, I = J_init, I_init
    outer = 0
    for _ in range(cfg.max_outer_iters):
        outer += 1
        rp = row_phase(X, I, J, cfg.max_inner_iters, trace_sink)
        J_new = rp.partition
        mid_total = penalized_loss(X, J_new, I, rp.centers, cfg.lam).total
        if best_alt is None or mid_total < best_alt[0]:
            best_alt = (mid_total, J_new, I)
        cp = column_phase(X, J_new, I, cfg.max_inner_iters, trace_sink)
        I_new = cp.partition
        if J_new == J and I_new == I:
            break
        J, I = J_new, I_new

    _, loss_final = _record_loss(X, J, I, cfg.lam)
    if loss_final.total < best_alt[0]:
        best_alt = (loss_final.total, J, I)

    if best_alt[0] <= loss_init.total:
        row_part, col_part = best_alt[1], best_alt[2]
        # canonical centers for the chosen partitions; one more update step
        # never increases the risk, so the comparison above stays valid
        cents, loss = _record_loss(X, row_part, col_part, cfg.lam)
        source = SOURCE_ALTERNATING
    else:
        row_part, col_part, cents, loss = J_init, I_init, c_init, loss_init
        source = SOURCE_SEPARATE_KMEANS
    return BiclusterResult(
        row_partition=row_part,
        col_partition=col_part,
        centers=cents,
        loss=loss,
        restart_index=0,
        outer_iterations=outer,
        source=source,
        seed=run_seed,
    )


def _run_on_permutation(
    X: DataMatrix,
    cfg: AkmConfig,
    row_perm: np.ndarray,
    col_perm: np.ndarray,
    run_seed: int,
    trace_sink: list | None = None,
) -> BiclusterResult:
    """Run once on the permuted matrix and map the result back to X's order.

    Centers and loss are recomputed on the original matrix so the stored
    state is exactly reproducible from the stored partitions.
    """
    V = X.values
    Xp = DataMatrix._wrap(np.ascontiguousarray(V[np.ix_(row_perm, col_perm)]))
    res = akm_single_run(Xp, cfg, run_seed, trace_sink)

    row_labels = np.empty(X.n_rows, dtype=np.int64)
    row_labels[row_perm] = res.row_partition.labels
    col_labels = np.empty(X.n_cols, dtype=np.int64)
    col_labels[col_perm] = res.col_partition.labels
    J = Partition(row_labels, cfg.k)
    I = Partition(col_labels, cfg.k)
    c, loss = _record_loss(X, J, I, cfg.lam)
    return dataclasses.replace(
        res, row_partition=J, col_partition=I, centers=c, loss=loss
    )


def akm_fit(
    X: DataMatrix,
    cfg: AkmConfig,
    trace_sink: list | None = None,
    restart_log: list | None = None,
) -> BiclusterResult:
    """Best-of-restarts fit; each restart runs on a freshly permuted matrix.

    Permutations and run seeds are derived from (cfg.seed, restart, retry),
    so results do not depend on execution order. A restart aborted by an
    empty cluster is retried with a fresh permutation up to
    cfg.empty_cluster_retry_cap extra attempts, then skipped. Ties between
    restarts go to the lowest restart index.
    """
    n, m = X.n_rows, X.n_cols
    if cfg.k > min(n, m):
        raise ValueError(f"k={cfg.k} exceeds min(n, m)={min(n, m)}")
    best: BiclusterResult | None = None
    for r in range(cfg.restarts):
        chosen: BiclusterResult | None = None
        retries = 0
        for retry in range(cfg.empty_cluster_retry_cap + 1):
            rng = rng_from(cfg.seed, _STREAM_PERMUTATION, r, retry)
            row_perm = rng.permutation(n)
            col_perm = rng.permutation(m)
            run_seed = derive_seed(cfg.seed, _STREAM_RUN, r, retry)
            try:
                chosen = _run_on_permutation(X, cfg, row_perm, col_perm, run_seed, trace_sink)
            except (RestartRequired, EmptyClusterError):
                retries += 1
                continue
            break
        if chosen is None:
            if restart_log is not None:
                restart_log.append(RestartSummary(r, "skipped", retries, None, None, None))
            continue
        chosen = dataclasses.replace(chosen, restart_index=r, seed=cfg.seed)
        if restart_log is not None:
            restart_log.append(
                RestartSummary(r, "ok", retries, chosen.loss.total, chosen.outer_iterations, chosen.source)
            )
        if best is None or chosen.loss.total < best.loss.total:
            best = chosen
    if best is None:
        raise FitFailedError(
            f"all {cfg.restarts} restarts were aborted by empty clusters "
            f"(k={cfg.k} may be too close to min(n, m)={min(n, m)})"
        )
    return best
