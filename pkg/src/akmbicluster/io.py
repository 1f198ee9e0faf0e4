"""File formats: numeric matrix CSV, label CSV, result and report documents.

Matrices are written as plain numeric CSV with 17 significant digits so a
write-read round trip reproduces every float64 exactly. Label files hold one
1-based integer per line. Fit results are JSON documents that can be
re-checked against the matrix they came from.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .bench import BenchReport
from .engine import AkmConfig, BiclusterResult, RestartSummary
from .loss import CenterSet, LossReport, penalized_loss
from .matrix import DataMatrix, Partition
from .metrics import ElbowCurve

__all__ = [
    "DataFormatError",
    "RESULT_FORMAT",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_labels_csv",
    "read_labels_csv",
    "result_document",
    "write_json",
    "read_result_document",
    "verify_result_document",
    "write_elbow_csv",
    "write_bench_files",
]

RESULT_FORMAT = "akm-bicluster-result/1"


class DataFormatError(ValueError):
    """Malformed input file: ragged rows, non-numeric cells, bad labels."""


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_matrix_csv(path, X) -> None:
    arr = X.values if isinstance(X, DataMatrix) else np.asarray(X, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        for row in arr:
            fh.write(",".join(_fmt(v) for v in row))
            fh.write("\n")


def _parse_numeric_row(cells: list[str], row_num: int) -> list[float]:
    out = []
    for col_num, cell in enumerate(cells, start=1):
        try:
            value = float(cell)
        except ValueError:
            raise DataFormatError(
                f"row {row_num}, column {col_num}: non-numeric cell {cell.strip()!r}"
            )
        if not math.isfinite(value):
            raise DataFormatError(
                f"row {row_num}, column {col_num}: non-finite value {cell.strip()!r}"
            )
        out.append(value)
    return out


def read_matrix_csv(path) -> DataMatrix:
    """Read a numeric CSV; a non-numeric first line is treated as a header."""
    rows: list[list[float]] = []
    width: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n").rstrip("\r") for line in fh]
    body = [line for line in lines if line.strip() != ""]
    if not body:
        raise DataFormatError(f"{path}: empty matrix file")
    start = 0
    try:
        _parse_numeric_row(body[0].split(","), 1)
    except DataFormatError:
        start = 1  # header row
    if start == len(body):
        raise DataFormatError(f"{path}: no data rows after the header")
    for row_num, line in enumerate(body[start:], start=1):
        values = _parse_numeric_row(line.split(","), row_num)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise DataFormatError(
                f"row {row_num}: expected {width} columns, found {len(values)} (ragged rows)"
            )
        rows.append(values)
    return DataMatrix(np.asarray(rows, dtype=np.float64))


def write_labels_csv(path, labels) -> None:
    arr = np.asarray(labels, dtype=np.int64)
    with open(path, "w", encoding="utf-8") as fh:
        for value in arr:
            fh.write(f"{int(value)}\n")


def read_labels_csv(path) -> np.ndarray:
    """Read a single-column integer label file; a non-numeric first line is a header."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh]
    body = [line for line in lines if line != ""]
    if not body:
        raise DataFormatError(f"{path}: empty labels file")
    start = 0
    try:
        int(body[0])
    except ValueError:
        start = 1
    if start == len(body):
        raise DataFormatError(f"{path}: no label rows after the header")
    labels = []
    for row_num, line in enumerate(body[start:], start=1):
        try:
            value = int(line)
        except ValueError:
            raise DataFormatError(f"row {row_num}: non-integer label {line!r}")
        if value < 1:
            raise DataFormatError(f"row {row_num}: labels must be 1-based, got {value}")
        labels.append(value)
    return np.asarray(labels, dtype=np.int64)


def _loss_dict(loss: LossReport) -> dict:
    return {
        "risk": loss.risk,
        "penalty": loss.penalty,
        "total": loss.total,
        "lambda": loss.lam,
        "noise_bicluster": loss.noise_bicluster,
    }


def result_document(
    result: BiclusterResult, cfg: AkmConfig, restart_log: list[RestartSummary]
) -> dict:
    return {
        "format": RESULT_FORMAT,
        "version": __version__,
        "params": {
            "k": cfg.k,
            "lambda": cfg.lam,
            "restarts": cfg.restarts,
            "seed": cfg.seed,
            "max_outer_iters": cfg.max_outer_iters,
            "max_inner_iters": cfg.max_inner_iters,
            "retry_cap": cfg.empty_cluster_retry_cap,
        },
        "row_labels": [int(v) for v in result.row_partition.labels],
        "col_labels": [int(v) for v in result.col_partition.labels],
        "centers": {str(j + 1): [float(v) for v in c] for j, c in enumerate(result.centers.centers)},
        "loss": _loss_dict(result.loss),
        "result": {
            "restart_index": result.restart_index,
            "outer_iterations": result.outer_iterations,
            "source": result.source,
            "seed": result.seed,
        },
        "restarts": [
            {
                "restart": s.restart_index,
                "status": s.status,
                "retries": s.retries,
                "total_loss": s.total_loss,
                "outer_iterations": s.outer_iterations,
                "source": s.source,
            }
            for s in restart_log
        ],
    }


def write_json(path, document: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")


def read_result_document(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: invalid JSON ({exc})")
    if not isinstance(doc, dict) or doc.get("format") != RESULT_FORMAT:
        raise DataFormatError(f"{path}: not a {RESULT_FORMAT} document")
    for key in ("params", "row_labels", "col_labels", "centers", "loss"):
        if key not in doc:
            raise DataFormatError(f"{path}: missing key {key!r}")
    k = int(doc["params"]["k"])
    try:
        Partition(doc["row_labels"], k)
        Partition(doc["col_labels"], k)
    except ValueError as exc:
        raise DataFormatError(f"{path}: invalid stored labels ({exc})")
    return doc


def verify_result_document(doc: dict, X: DataMatrix, rel_tol: float = 1e-9) -> None:
    """Recompute the loss from the stored state; mismatch fails loudly."""
    k = int(doc["params"]["k"])
    lam = float(doc["loss"]["lambda"])
    J = Partition(doc["row_labels"], k)
    I = Partition(doc["col_labels"], k)
    centers = CenterSet([doc["centers"][str(j)] for j in range(1, k + 1)], I)
    recomputed = penalized_loss(X, J, I, centers, lam)
    stored = float(doc["loss"]["total"])
    if not math.isclose(recomputed.total, stored, rel_tol=rel_tol, abs_tol=1e-12):
        raise DataFormatError(
            f"stored loss {stored} does not match recomputed loss {recomputed.total}"
        )


def write_elbow_csv(path, curve: ElbowCurve) -> None:
    """Two-column plot-ready CSV; per-k seeds and failures go to a sidecar."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "loss"])
        for k, loss in zip(curve.k_values, curve.losses):
            writer.writerow([k, repr(float(loss))])


def elbow_meta_document(curve: ElbowCurve, seed: int) -> dict:
    return {
        "format": "akm-bicluster-elbow/1",
        "version": __version__,
        "seed": seed,
        "points": [
            {"k": k, "loss": loss, "restarts": r, "seed": s}
            for k, loss, r, s in zip(curve.k_values, curve.losses, curve.restarts, curve.seeds)
        ],
        "failed_k": list(curve.failed_k),
    }


def write_bench_files(report: BenchReport, out_dir) -> dict[str, Path]:
    """Write per-replicate and summary files; timing is deliberately omitted
    so that reruns with the same seed are byte-identical."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "replicates": out / "replicates.csv",
        "summary_csv": out / "summary.csv",
        "summary_json": out / "summary.json",
    }
    with open(paths["replicates"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["setting", "a", "b", "method", "replicate", "data_seed", "status", "rate"])
        for r in report.records:
            writer.writerow(
                [
                    r.setting,
                    repr(float(r.a)),
                    repr(float(r.b)),
                    r.method,
                    r.replicate,
                    r.data_seed,
                    r.status,
                    "" if r.rate is None else repr(float(r.rate)),
                ]
            )
    with open(paths["summary_csv"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["setting", "a", "b", "method", "replicates_ok", "replicates_failed", "mean_rate", "std_error"]
        )
        for s in report.summaries:
            writer.writerow(
                [
                    s.setting,
                    repr(float(s.a)),
                    repr(float(s.b)),
                    s.method,
                    s.replicates_ok,
                    s.replicates_failed,
                    "" if s.mean_rate is None else repr(float(s.mean_rate)),
                    "" if s.std_error is None else repr(float(s.std_error)),
                ]
            )
    plan = report.plan
    summary_doc = {
        "format": "akm-bicluster-bench/1",
        "version": __version__,
        "plan": {
            "cells": [list(c) for c in plan.cells],
            "methods": [m.token for m in plan.methods],
            "n": plan.n,
            "k": plan.k,
            "replicates": plan.replicates,
            "restarts": plan.restarts,
            "seed": plan.seed,
            "max_outer_iters": plan.max_outer_iters,
            "max_inner_iters": plan.max_inner_iters,
            "retry_cap": plan.retry_cap,
        },
        "summaries": [
            {
                "setting": s.setting,
                "a": s.a,
                "b": s.b,
                "method": s.method,
                "replicates_ok": s.replicates_ok,
                "replicates_failed": s.replicates_failed,
                "mean_rate": s.mean_rate,
                "std_error": s.std_error,
            }
            for s in report.summaries
        ],
    }
    write_json(paths["summary_json"], summary_doc)
    return paths
