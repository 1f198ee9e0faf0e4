"""Batch command line interface.

Subcommands: fit, simulate, eval, elbow, bench. Every command is
deterministic given --seed; when --seed is omitted one is drawn from system
entropy and recorded in the output. Exit codes: 0 success, 1 usage error,
2 data error, 3 algorithm failure.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys
from pathlib import Path

from . import __version__
from .bench import PRESETS, BenchPlan, MethodSpec, run_bench
from .engine import AkmConfig, FitFailedError, akm_fit
from .io import (
    DataFormatError,
    elbow_meta_document,
    read_labels_csv,
    read_matrix_csv,
    read_result_document,
    result_document,
    verify_result_document,
    write_bench_files,
    write_elbow_csv,
    write_json,
    write_labels_csv,
    write_matrix_csv,
)
from .kmeans import EmptyClusterError
from .metrics import elbow_curve, entry_misclassification_rate, sample_misclassification_rate
from .simulate import GENERATOR_ALGORITHM, SETTINGS, BlockModelSpec, generate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ALGORITHM = 3

_PLAN_KEYS = (
    "settings",
    "a",
    "b",
    "n",
    "k",
    "replicates",
    "restarts",
    "methods",
    "seed",
    "max_outer_iters",
    "max_inner_iters",
    "retry_cap",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default; usage errors are exit code 1 here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_or_entropy(seed: int | None) -> int:
    return secrets.randbits(63) if seed is None else seed


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=20, help="independent restarts (default 20)")
    p.add_argument("--max-outer-iters", type=int, default=100)
    p.add_argument("--max-inner-iters", type=int, default=100)
    p.add_argument("--retry-cap", type=int, default=20,
                   help="extra permutation retries after an empty-cluster abort")


def build_parser() -> _Parser:
    parser = _Parser(prog="akmbicluster", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_fit = sub.add_parser("fit", help="fit biclusters to a matrix CSV")
    p_fit.add_argument("matrix", help="numeric CSV, rows = samples, columns = features")
    p_fit.add_argument("--k", type=int, required=True, help="number of biclusters")
    p_fit.add_argument("--lambda", dest="lam", type=float, default=0.0,
                       help="penalty weight (default 0)")
    _add_engine_flags(p_fit)
    p_fit.add_argument("--seed", type=int, default=None)
    p_fit.add_argument("--output", required=True, help="result JSON path")
    p_fit.set_defaults(func=cmd_fit)

    p_sim = sub.add_parser("simulate", help="draw a block-model matrix")
    p_sim.add_argument("--setting", choices=SETTINGS, required=True)
    p_sim.add_argument("--n", type=int, required=True, help="number of rows")
    p_sim.add_argument("--a", type=float, default=1.0, help="aspect ratio, m = round(a*n)")
    p_sim.add_argument("--b", type=float, required=True, help="signal level")
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--output", required=True, help="matrix CSV path")
    p_sim.add_argument("--row-classes", required=True, help="true row class CSV path")
    p_sim.add_argument("--col-classes", required=True, help="true column class CSV path")
    p_sim.set_defaults(func=cmd_simulate)

    p_eval = sub.add_parser("eval", help="score a fit against true classes")
    p_eval.add_argument("result", help="result JSON from fit")
    p_eval.add_argument("--true-rows", required=True, help="true row labels CSV")
    p_eval.add_argument("--true-cols", default=None, help="true column labels CSV (optional)")
    p_eval.add_argument("--matrix", default=None,
                        help="matrix CSV; when given, the stored loss is re-checked")
    p_eval.add_argument("--output", required=True, help="rates JSON path")
    p_eval.set_defaults(func=cmd_eval)

    p_elbow = sub.add_parser("elbow",
                             help="loss for a range of k (lambda = 0)")
    p_elbow.add_argument("matrix")
    p_elbow.add_argument("--k-min", type=int, default=1)
    p_elbow.add_argument("--k-max", type=int, required=True)
    p_elbow.add_argument("--restarts", type=int, default=20)
    p_elbow.add_argument("--seed", type=int, default=None)
    p_elbow.add_argument("--output", required=True, help="two-column CSV path (k, loss)")
    p_elbow.set_defaults(func=cmd_elbow)

    p_bench = sub.add_parser("bench",
                             help="replicated benchmark over a (setting, a, b) grid")
    p_bench.add_argument("plan", nargs="?", default=None,
                         help="optional plan file with key = value lines")
    p_bench.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p_bench.add_argument("--settings", default=None, help="comma list, e.g. variance-shift")
    p_bench.add_argument("--a-values", default=None, help="comma list of aspect ratios")
    p_bench.add_argument("--b-values", default=None, help="comma list of signal levels")
    p_bench.add_argument("--n", type=int, default=None)
    p_bench.add_argument("--k", type=int, default=None)
    p_bench.add_argument("--replicates", type=int, default=None)
    p_bench.add_argument("--restarts", type=int, default=None)
    p_bench.add_argument("--methods", default=None,
                         help="comma list of akm:<lambda> and km (default akm:0,akm:0.1,akm:1,km)")
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--max-outer-iters", type=int, default=None)
    p_bench.add_argument("--max-inner-iters", type=int, default=None)
    p_bench.add_argument("--retry-cap", type=int, default=None)
    p_bench.add_argument("--threads", type=int, default=None,
                         help="worker processes (default: available cores)")
    p_bench.add_argument("--output", required=True, help="output directory")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def cmd_fit(args) -> int:
    X = read_matrix_csv(args.matrix)
    if not 1 <= args.k <= min(X.n_rows, X.n_cols):
        raise UsageError(f"--k must lie in 1..min(n, m) = {min(X.n_rows, X.n_cols)}, got {args.k}")
    if args.lam < 0:
        raise UsageError("--lambda must be nonnegative")
    seed = _seed_or_entropy(args.seed)
    cfg = AkmConfig(
        k=args.k,
        lam=args.lam,
        restarts=args.restarts,
        max_outer_iters=args.max_outer_iters,
        max_inner_iters=args.max_inner_iters,
        empty_cluster_retry_cap=args.retry_cap,
        seed=seed,
    )
    restart_log: list = []
    result = akm_fit(X, cfg, restart_log=restart_log)
    doc = result_document(result, cfg, restart_log)
    verify_result_document(doc, X)
    write_json(args.output, doc)
    print(
        f"fit: k={cfg.k} lambda={cfg.lam:g} seed={seed} "
        f"loss={result.loss.total:.12g} source={result.source} -> {args.output}"
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    seed = _seed_or_entropy(args.seed)
    spec = BlockModelSpec(n=args.n, a=args.a, b=args.b, setting=args.setting, seed=seed)
    labeled = generate(spec)
    write_matrix_csv(args.output, labeled.X)
    write_labels_csv(args.row_classes, labeled.row_classes)
    write_labels_csv(args.col_classes, labeled.col_classes)
    meta = {
        "format": "akm-bicluster-simulation/1",
        "version": __version__,
        "setting": spec.setting,
        "n": spec.n,
        "m": spec.m,
        "a": spec.a,
        "b": spec.b,
        "p": list(spec.p),
        "q": list(spec.q),
        "seed": seed,
        "generator": GENERATOR_ALGORITHM,
    }
    write_json(str(args.output) + ".meta.json", meta)
    print(f"simulate: {spec.setting} {spec.n}x{spec.m} b={spec.b:g} seed={seed} -> {args.output}")
    return EXIT_OK


def cmd_eval(args) -> int:
    doc = read_result_document(args.result)
    pred_rows = doc["row_labels"]
    pred_cols = doc["col_labels"]
    true_rows = read_labels_csv(args.true_rows)
    if len(true_rows) != len(pred_rows):
        raise UsageError(
            f"result has {len(pred_rows)} rows but --true-rows has {len(true_rows)} labels"
        )
    if args.matrix is not None:
        X = read_matrix_csv(args.matrix)
        verify_result_document(doc, X)
    rates = {
        "format": "akm-bicluster-rates/1",
        "version": __version__,
        "sample_misclassification_rate": sample_misclassification_rate(pred_rows, true_rows),
    }
    if args.true_cols is not None:
        true_cols = read_labels_csv(args.true_cols)
        if len(true_cols) != len(pred_cols):
            raise UsageError(
                f"result has {len(pred_cols)} columns but --true-cols has {len(true_cols)} labels"
            )
        rates["entry_misclassification_rate"] = entry_misclassification_rate(
            pred_rows, pred_cols, true_rows, true_cols
        )
    write_json(args.output, rates)
    for key in ("sample_misclassification_rate", "entry_misclassification_rate"):
        if key in rates:
            print(f"{key} = {rates[key]:.6g}")
    return EXIT_OK


def cmd_elbow(args) -> int:
    X = read_matrix_csv(args.matrix)
    if not 1 <= args.k_min <= args.k_max <= min(X.n_rows, X.n_cols):
        raise UsageError(
            f"need 1 <= k-min <= k-max <= min(n, m) = {min(X.n_rows, X.n_cols)}, "
            f"got {args.k_min}..{args.k_max}"
        )
    seed = _seed_or_entropy(args.seed)
    curve = elbow_curve(X, args.k_min, args.k_max, restarts=args.restarts, seed=seed)
    write_elbow_csv(args.output, curve)
    write_json(str(args.output) + ".meta.json", elbow_meta_document(curve, seed))
    for k, loss in zip(curve.k_values, curve.losses):
        print(f"k={k} loss={loss:.12g}")
    for k in curve.failed_k:
        print(f"k={k} failed (all restarts aborted)")
    return EXIT_OK


def _parse_plan_file(path: str) -> dict:
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_num, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{line_num}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _PLAN_KEYS:
                raise UsageError(
                    f"{path}:{line_num}: unknown plan key {key!r}; valid keys: "
                    + ", ".join(_PLAN_KEYS)
                )
            values[key] = value.strip()
    return values


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def cmd_bench(args) -> int:
    # Precedence: built-in defaults < preset < plan file < explicit flags.
    conf = {
        "settings": list(SETTINGS),
        "a": [0.5, 1.0, 2.0],
        "b": [0.20, 0.25, 0.30],
        "n": 400,
        "k": 2,
        "replicates": 10,
        "restarts": 20,
        "methods": "akm:0,akm:0.1,akm:1,km",
        "seed": None,
        "max_outer_iters": 100,
        "max_inner_iters": 100,
        "retry_cap": 20,
    }
    if args.preset is not None:
        conf.update(PRESETS[args.preset])
    if args.plan is not None:
        plan_values = _parse_plan_file(args.plan)
        try:
            if "settings" in plan_values:
                conf["settings"] = _split_list(plan_values["settings"])
            if "a" in plan_values:
                conf["a"] = [float(v) for v in _split_list(plan_values["a"])]
            if "b" in plan_values:
                conf["b"] = [float(v) for v in _split_list(plan_values["b"])]
            for key in ("n", "k", "replicates", "restarts", "seed",
                        "max_outer_iters", "max_inner_iters", "retry_cap"):
                if key in plan_values:
                    conf[key] = int(plan_values[key])
            if "methods" in plan_values:
                conf["methods"] = plan_values["methods"]
        except ValueError as exc:
            raise UsageError(f"{args.plan}: {exc}")
    if args.settings is not None:
        conf["settings"] = _split_list(args.settings)
    if args.a_values is not None:
        conf["a"] = [float(v) for v in _split_list(args.a_values)]
    if args.b_values is not None:
        conf["b"] = [float(v) for v in _split_list(args.b_values)]
    for key in ("n", "k", "replicates", "restarts", "max_outer_iters",
                "max_inner_iters", "retry_cap"):
        flag = getattr(args, key)
        if flag is not None:
            conf[key] = flag
    if args.methods is not None:
        conf["methods"] = args.methods
    if args.seed is not None:
        conf["seed"] = args.seed

    try:
        methods = tuple(MethodSpec.parse(tok) for tok in _split_list(conf["methods"]))
        plan = BenchPlan(
            cells=tuple(
                (setting, a, b)
                for setting in conf["settings"]
                for a in conf["a"]
                for b in conf["b"]
            ),
            methods=methods,
            n=conf["n"],
            k=conf["k"],
            replicates=conf["replicates"],
            restarts=conf["restarts"],
            seed=_seed_or_entropy(conf["seed"]),
            max_outer_iters=conf["max_outer_iters"],
            max_inner_iters=conf["max_inner_iters"],
            retry_cap=conf["retry_cap"],
        )
    except ValueError as exc:
        raise UsageError(str(exc))

    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise UsageError("--threads must be positive")
    report = run_bench(plan, threads=threads)
    paths = write_bench_files(report, args.output)
    print(f"bench: seed={plan.seed} {len(plan.cells)} cell(s) x {plan.replicates} replicate(s)")
    for s in report.summaries:
        mean = "n/a" if s.mean_rate is None else f"{s.mean_rate:.4f}"
        se = "n/a" if s.std_error is None else f"{s.std_error:.4f}"
        print(
            f"  {s.setting} a={s.a:g} b={s.b:g} {s.method}: "
            f"rate={mean}({se}) ok={s.replicates_ok} failed={s.replicates_failed} "
            f"time={s.mean_elapsed:.2f}s avg [{s.min_elapsed:.2f}, {s.max_elapsed:.2f}]"
        )
    print(f"  wrote {', '.join(str(p) for p in paths.values())}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (FitFailedError, EmptyClusterError) as exc:
        print(f"algorithm failure: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
