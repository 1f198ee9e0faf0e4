"""Euclidean k-means (Lloyd), used both as initialization and as a baseline.

Initialization deals the points, in a random order, round-robin into k
clusters and starts from those cluster means. Center-at-a-data-point
seeding is deliberately avoided: on high-dimensional noise, pairwise
distances concentrate and every point snaps to whichever seed point has the
smaller norm, freezing Lloyd at a near-singleton split. Balanced random
partitions keep the initial centers near the data bulk, where assignment is
driven by direction instead of seed norms.

An empty cluster arising later gets one repair per iteration (its center is
reseeded to the point farthest from it); if a cluster is still empty after
the repair the attempt is abandoned and the run restarts from a fresh
random partition, up to `retry_cap` attempts in total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import Partition

__all__ = ["KMeansConfig", "EmptyClusterError", "lloyd_kmeans", "within_cluster_ss"]


class EmptyClusterError(RuntimeError):
    """Raised when every k-means attempt ends with an empty cluster."""


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iters: int = 100
    seed: int = 0
    retry_cap: int = 10

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.retry_cap < 1:
            raise ValueError("retry_cap must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def _pairwise_sq_distances(P: np.ndarray, centers: np.ndarray, p_sq: np.ndarray) -> np.ndarray:
    # ||x - c||^2 = ||x||^2 + ||c||^2 - 2 x.c, clipped against roundoff.
    D = p_sq[:, None] + (centers * centers).sum(axis=1)[None, :] - 2.0 * (P @ centers.T)
    np.maximum(D, 0.0, out=D)
    return D


def _initial_centers(P: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    # Random-partition init: uniform labels, redrawn while any cluster is
    # empty; a balanced round-robin deal is the fallback (and the only draw
    # that can succeed when k equals the number of points).
    n = P.shape[0]
    for _ in range(50):
        labels = rng.integers(0, k, size=n)
        if len(np.unique(labels)) == k:
            break
    else:
        labels = np.empty(n, dtype=np.int64)
        labels[rng.permutation(n)] = np.arange(n) % k
    return np.stack([P[labels == j].mean(axis=0) for j in range(k)])


def _lloyd_attempt(
    P: np.ndarray, k: int, max_iters: int, rng: np.random.Generator, trace: list | None
) -> np.ndarray | None:
    n = P.shape[0]
    p_sq = (P * P).sum(axis=1)
    centers = _initial_centers(P, k, rng)
    labels: np.ndarray | None = None
    for _ in range(max_iters):
        D = _pairwise_sq_distances(P, centers, p_sq)
        new_labels = D.argmin(axis=1)
        counts = np.bincount(new_labels, minlength=k)
        if (counts == 0).any():
            used: set[int] = set()
            for j in np.flatnonzero(counts == 0):
                order = np.argsort(-D[:, j], kind="stable")
                pick = next((int(i) for i in order if int(i) not in used), None)
                if pick is None:
                    return None
                used.add(pick)
                centers[j] = P[pick]
            D = _pairwise_sq_distances(P, centers, p_sq)
            new_labels = D.argmin(axis=1)
            if (np.bincount(new_labels, minlength=k) == 0).any():
                return None
        if trace is not None:
            trace.append(float(D[np.arange(n), new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        centers = np.stack([P[labels == j].mean(axis=0) for j in range(k)])
    return labels


def lloyd_kmeans(points, cfg: KMeansConfig, trace_sink: list | None = None) -> Partition:
    """Cluster points (one per row) into cfg.k nonempty clusters.

    Deterministic given cfg.seed. When trace_sink is given, the per-iteration
    within-cluster sums of squares of the successful attempt are appended.
    """
    P = np.asarray(points, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] < 1:
        raise ValueError("points must form a nonempty 2-D array (one point per row)")
    if cfg.k > P.shape[0]:
        raise ValueError(f"k={cfg.k} exceeds the number of points {P.shape[0]}")
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.retry_cap):
        trace: list | None = [] if trace_sink is not None else None
        labels = _lloyd_attempt(P, cfg.k, cfg.max_iters, rng, trace)
        if labels is not None:
            if trace_sink is not None:
                trace_sink.extend(trace)
            return Partition(labels + 1, cfg.k)
    raise EmptyClusterError(
        f"k-means failed with empty clusters in all {cfg.retry_cap} attempts (k={cfg.k})"
    )


def within_cluster_ss(points, partition: Partition) -> float:
    """Total squared Euclidean distance of points to their cluster means."""
    P = np.asarray(points, dtype=np.float64)
    if P.shape[0] != partition.size:
        raise ValueError(f"{P.shape[0]} points but partition covers {partition.size}")
    total = 0.0
    for members in partition.groups():
        block = P[members]
        diff = block - block.mean(axis=0)
        total += float((diff * diff).sum())
    return total
