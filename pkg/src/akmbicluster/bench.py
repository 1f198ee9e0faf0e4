"""Replicated benchmark grids over the block model.

Each grid cell is a (setting, a, b) triple. Every replicate draws its own
matrix from a derived seed, runs the requested methods, and scores the entry
misclassification rate against the generating classes. Aggregation is
order-independent, so replicates may run in parallel without affecting any
result.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engine import AkmConfig, FitFailedError, akm_fit
from .kmeans import EmptyClusterError, KMeansConfig, lloyd_kmeans, within_cluster_ss
from .matrix import Partition
from .metrics import entry_misclassification_rate
from .seeds import derive_seed
from .simulate import SETTINGS, BlockModelSpec, generate

__all__ = [
    "MethodSpec",
    "BenchPlan",
    "ReplicateRecord",
    "CellSummary",
    "BenchReport",
    "PRESETS",
    "run_bench",
]

_STREAM_DATA = 31
_STREAM_METHOD = 32
_KIND_TAGS = {"akm": 1, "km": 2}

PRESETS = {
    "desk": {"n": 200, "restarts": 20, "replicates": 10},
    "paper": {"n": 400, "restarts": 100, "replicates": 50},
}


@dataclass(frozen=True)
class MethodSpec:
    """A benchmarked method: alternating k-means at some lam, or separate k-means."""

    kind: str  # "akm" or "km"
    lam: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in _KIND_TAGS:
            raise ValueError(f"unknown method kind {self.kind!r}; expected 'akm' or 'km'")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")

    @property
    def token(self) -> str:
        if self.kind == "km":
            return "km"
        return f"akm:{self.lam:g}"

    @classmethod
    def parse(cls, token: str) -> "MethodSpec":
        token = token.strip()
        if token == "km":
            return cls(kind="km")
        if token.startswith("akm:"):
            try:
                lam = float(token[4:])
            except ValueError:
                raise ValueError(f"bad method token {token!r}; expected akm:<lambda> or km")
            return cls(kind="akm", lam=lam)
        if token == "akm":
            return cls(kind="akm", lam=0.0)
        raise ValueError(f"bad method token {token!r}; expected akm:<lambda> or km")


@dataclass(frozen=True)
class BenchPlan:
    cells: tuple[tuple[str, float, float], ...]  # (setting, a, b)
    methods: tuple[MethodSpec, ...]
    n: int = 400
    k: int = 2
    replicates: int = 10
    restarts: int = 20
    seed: int = 0
    max_outer_iters: int = 100
    max_inner_iters: int = 100
    retry_cap: int = 20

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("benchmark grid must contain at least one cell")
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.replicates < 1:
            raise ValueError("replicates must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        for setting, a, b in self.cells:
            if setting not in SETTINGS:
                raise ValueError(f"unknown setting {setting!r}; expected one of {SETTINGS}")
            if a <= 0 or b < 0:
                raise ValueError(f"bad cell (a={a}, b={b}); need a > 0 and b >= 0")


@dataclass(frozen=True)
class ReplicateRecord:
    setting: str
    a: float
    b: float
    method: str
    replicate: int
    data_seed: int
    status: str  # "ok" or "failed"
    rate: Optional[float]
    elapsed: float


@dataclass(frozen=True)
class CellSummary:
    setting: str
    a: float
    b: float
    method: str
    replicates_ok: int
    replicates_failed: int
    mean_rate: Optional[float]
    std_error: Optional[float]
    mean_elapsed: float
    min_elapsed: float
    max_elapsed: float


@dataclass(frozen=True)
class BenchReport:
    plan: BenchPlan
    records: tuple[ReplicateRecord, ...]
    summaries: tuple[CellSummary, ...]


def _cell_path(setting: str, a: float, b: float) -> tuple[int, int, int]:
    return (SETTINGS.index(setting), int(round(a * 1000)), int(round(b * 1000)))


def _best_kmeans(points: np.ndarray, k: int, restarts: int, seed: int, axis_tag: int) -> Partition:
    """Best-of-restarts Lloyd by within-cluster sum of squares."""
    best: Partition | None = None
    best_ss = math.inf
    failures = 0
    for r in range(restarts):
        cfg = KMeansConfig(k=k, seed=derive_seed(seed, axis_tag, r))
        try:
            part = lloyd_kmeans(points, cfg)
        except EmptyClusterError:
            failures += 1
            continue
        ss = within_cluster_ss(points, part)
        if ss < best_ss:
            best, best_ss = part, ss
    if best is None:
        raise EmptyClusterError(f"all {restarts} k-means initializations failed")
    return best


def _run_replicate(
    plan: BenchPlan,
    setting: str,
    a: float,
    b: float,
    replicate: int,
    collect_traces: bool,
) -> tuple[list[ReplicateRecord], list]:
    path = _cell_path(setting, a, b)
    data_seed = derive_seed(plan.seed, _STREAM_DATA, *path, replicate)
    labeled = generate(BlockModelSpec(n=plan.n, a=a, b=b, setting=setting, seed=data_seed))
    records: list[ReplicateRecord] = []
    traces: list = []
    sink = traces if collect_traces else None
    for method in plan.methods:
        lam_tag = int(round(method.lam * 1000))
        method_seed = derive_seed(
            plan.seed, _STREAM_METHOD, *path, replicate, _KIND_TAGS[method.kind], lam_tag
        )
        start = time.perf_counter()
        rate: Optional[float] = None
        status = "ok"
        try:
            if method.kind == "akm":
                cfg = AkmConfig(
                    k=plan.k,
                    lam=method.lam,
                    restarts=plan.restarts,
                    max_outer_iters=plan.max_outer_iters,
                    max_inner_iters=plan.max_inner_iters,
                    empty_cluster_retry_cap=plan.retry_cap,
                    seed=method_seed,
                )
                result = akm_fit(labeled.X, cfg, trace_sink=sink)
                rows, cols = result.row_partition, result.col_partition
            else:
                V = labeled.X.values
                rows = _best_kmeans(V, plan.k, plan.restarts, method_seed, 1)
                cols = _best_kmeans(V.T, plan.k, plan.restarts, method_seed, 2)
            rate = entry_misclassification_rate(
                rows, cols, labeled.row_classes, labeled.col_classes
            )
        except (FitFailedError, EmptyClusterError):
            status = "failed"
        elapsed = time.perf_counter() - start
        records.append(
            ReplicateRecord(
                setting=setting,
                a=a,
                b=b,
                method=method.token,
                replicate=replicate,
                data_seed=data_seed,
                status=status,
                rate=rate,
                elapsed=elapsed,
            )
        )
    return records, traces


def _summarize(plan: BenchPlan, records: list[ReplicateRecord]) -> list[CellSummary]:
    summaries = []
    for setting, a, b in plan.cells:
        for method in plan.methods:
            cell = [
                r
                for r in records
                if (r.setting, r.a, r.b, r.method) == (setting, a, b, method.token)
            ]
            rates = [r.rate for r in cell if r.status == "ok"]
            n_ok = len(rates)
            if n_ok == 0:
                mean = se = None
            else:
                mean = float(np.mean(rates))
                se = float(np.std(rates, ddof=1) / math.sqrt(n_ok)) if n_ok > 1 else 0.0
            elapsed = [r.elapsed for r in cell]
            summaries.append(
                CellSummary(
                    setting=setting,
                    a=a,
                    b=b,
                    method=method.token,
                    replicates_ok=n_ok,
                    replicates_failed=len(cell) - n_ok,
                    mean_rate=mean,
                    std_error=se,
                    mean_elapsed=float(np.mean(elapsed)),
                    min_elapsed=float(min(elapsed)),
                    max_elapsed=float(max(elapsed)),
                )
            )
    return summaries


def run_bench(plan: BenchPlan, threads: int = 1, trace_sink: list | None = None) -> BenchReport:
    """Execute the plan; identical plans and seeds give identical reports.

    threads > 1 distributes replicates over processes; record order and all
    numbers are independent of scheduling.
    """
    if threads < 1:
        raise ValueError("threads must be positive")
    tasks = [
        (setting, a, b, rep)
        for setting, a, b in plan.cells
        for rep in range(plan.replicates)
    ]
    collect = trace_sink is not None
    results: list[tuple[list[ReplicateRecord], list]] = []
    if threads == 1 or len(tasks) == 1:
        for setting, a, b, rep in tasks:
            results.append(_run_replicate(plan, setting, a, b, rep, collect))
    else:
        with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
            futures = [
                pool.submit(_run_replicate, plan, setting, a, b, rep, collect)
                for setting, a, b, rep in tasks
            ]
            results = [f.result() for f in futures]
    records: list[ReplicateRecord] = []
    for recs, traces in results:
        records.extend(recs)
        if trace_sink is not None:
            trace_sink.extend(traces)
    summaries = _summarize(plan, records)
    return BenchReport(plan=plan, records=tuple(records), summaries=tuple(summaries))
