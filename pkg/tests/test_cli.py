import json
import subprocess
import sys

import numpy as np
import pytest
from helpers_oracle import two_block_matrix

from akmbicluster.cli import main
from akmbicluster.io import read_labels_csv, read_matrix_csv, write_labels_csv, write_matrix_csv


def run_cli(*args):
    return main([str(a) for a in args])


@pytest.fixture()
def block_csv(tmp_path):
    path = tmp_path / "blocks.csv"
    write_matrix_csv(path, two_block_matrix(4))
    return path


def test_fit_noiseless_blocks(tmp_path, block_csv, capsys):
    out = tmp_path / "result.json"
    code = run_cli("fit", block_csv, "--k", 2, "--lambda", 0, "--restarts", 5, "--seed", 11,
                   "--output", out)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["loss"]["total"] <= 1e-12
    rows = doc["row_labels"]
    cols = doc["col_labels"]
    assert rows[0] == rows[1] != rows[2] == rows[3]
    assert cols[0] == cols[1] != cols[2] == cols[3]
    assert doc["params"]["seed"] == 11
    assert len(doc["restarts"]) == 5


def test_fit_k1(tmp_path, block_csv):
    out = tmp_path / "result.json"
    assert run_cli("fit", block_csv, "--k", 1, "--seed", 0, "--output", out) == 0
    doc = json.loads(out.read_text())
    assert set(doc["row_labels"]) == {1}
    assert set(doc["col_labels"]) == {1}


def test_fit_same_seed_identical_bytes(tmp_path, block_csv):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    run_cli("fit", block_csv, "--k", 2, "--seed", 5, "--output", out1)
    run_cli("fit", block_csv, "--k", 2, "--seed", 5, "--output", out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_fit_k_out_of_range_is_usage_error(tmp_path, block_csv):
    assert run_cli("fit", block_csv, "--k", 9, "--seed", 0, "--output", tmp_path / "x.json") == 1


def test_fit_ragged_csv_is_data_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3\n4,5\n")
    assert run_cli("fit", bad, "--k", 2, "--seed", 0, "--output", tmp_path / "x.json") == 2


def test_fit_missing_file_is_data_error(tmp_path):
    assert run_cli("fit", tmp_path / "nope.csv", "--k", 2, "--seed", 0,
                   "--output", tmp_path / "x.json") == 2


def test_fit_restart_exhaustion_is_algorithm_error(tmp_path):
    flat = tmp_path / "flat.csv"
    write_matrix_csv(flat, np.ones((4, 4)))
    code = run_cli("fit", flat, "--k", 3, "--restarts", 2, "--retry-cap", 2, "--seed", 0,
                   "--output", tmp_path / "x.json")
    assert code == 3


def test_simulate_shapes_and_meta(tmp_path):
    out = tmp_path / "X.csv"
    rows, cols = tmp_path / "rows.csv", tmp_path / "cols.csv"
    code = run_cli("simulate", "--setting", "mean-shift", "--n", 40, "--a", 0.5, "--b", 0.25,
                   "--seed", 9, "--output", out, "--row-classes", rows, "--col-classes", cols)
    assert code == 0
    X = read_matrix_csv(out)
    assert X.shape == (40, 20)
    assert len(read_labels_csv(rows)) == 40
    assert len(read_labels_csv(cols)) == 20
    meta = json.loads((tmp_path / "X.csv.meta.json").read_text())
    assert meta["seed"] == 9
    assert meta["generator"] == "pcg64"
    assert meta["m"] == 20


def test_simulate_deterministic(tmp_path):
    args = ["simulate", "--setting", "variance-shift", "--n", 30, "--b", 0.3, "--seed", 4]
    run_cli(*args, "--output", tmp_path / "x1.csv", "--row-classes", tmp_path / "r1.csv",
            "--col-classes", tmp_path / "c1.csv")
    run_cli(*args, "--output", tmp_path / "x2.csv", "--row-classes", tmp_path / "r2.csv",
            "--col-classes", tmp_path / "c2.csv")
    assert (tmp_path / "x1.csv").read_bytes() == (tmp_path / "x2.csv").read_bytes()
    assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()
    assert (tmp_path / "c1.csv").read_bytes() == (tmp_path / "c2.csv").read_bytes()


def test_eval_perfect_and_quarter(tmp_path, block_csv):
    result = tmp_path / "result.json"
    run_cli("fit", block_csv, "--k", 2, "--seed", 11, "--restarts", 5, "--output", result)
    truth_rows, truth_cols = tmp_path / "tr.csv", tmp_path / "tc.csv"
    doc = json.loads(result.read_text())
    write_labels_csv(truth_rows, [1, 1, 2, 2])
    write_labels_csv(truth_cols, [1, 1, 2, 2])
    rates_path = tmp_path / "rates.json"
    code = run_cli("eval", result, "--true-rows", truth_rows, "--true-cols", truth_cols,
                   "--matrix", block_csv, "--output", rates_path)
    assert code == 0
    rates = json.loads(rates_path.read_text())
    assert rates["sample_misclassification_rate"] == 0.0
    assert rates["entry_misclassification_rate"] == 0.0


def test_eval_length_mismatch_is_usage_error(tmp_path, block_csv):
    result = tmp_path / "result.json"
    run_cli("fit", block_csv, "--k", 2, "--seed", 11, "--output", result)
    short = tmp_path / "short.csv"
    write_labels_csv(short, [1, 2])
    assert run_cli("eval", result, "--true-rows", short, "--output", tmp_path / "r.json") == 1


def test_elbow_csv_output(tmp_path):
    # small noise keeps all rows distinct so every k in range is fittable
    rng = np.random.default_rng(60)
    mat = tmp_path / "m.csv"
    write_matrix_csv(mat, two_block_matrix(8) + 0.01 * rng.standard_normal((8, 8)))
    out = tmp_path / "curve.csv"
    code = run_cli("elbow", mat, "--k-min", 1, "--k-max", 3, "--restarts", 4, "--seed", 2,
                   "--output", out)
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "k,loss"
    ks = [int(line.split(",")[0]) for line in lines[1:]]
    losses = [float(line.split(",")[1]) for line in lines[1:]]
    assert ks == [1, 2, 3]
    assert losses[1] < 0.01 * losses[0]  # sharp drop at the true k
    meta = json.loads((tmp_path / "curve.csv.meta.json").read_text())
    assert meta["seed"] == 2
    assert [p["k"] for p in meta["points"]] == [1, 2, 3]


def test_elbow_bad_range_is_usage_error(tmp_path, block_csv):
    assert run_cli("elbow", block_csv, "--k-min", 3, "--k-max", 2, "--seed", 0,
                   "--output", tmp_path / "c.csv") == 1


def test_bench_flags_smoke(tmp_path):
    out = tmp_path / "bench"
    code = run_cli("bench", "--settings", "variance-shift", "--a-values", "1.0",
                   "--b-values", "0.3", "--n", 30, "--replicates", 2, "--restarts", 3,
                   "--methods", "akm:0,km", "--seed", 7, "--threads", 1, "--output", out)
    assert code == 0
    rep_lines = (out / "replicates.csv").read_text().strip().splitlines()
    assert len(rep_lines) == 1 + 2 * 2  # header + 2 replicates x 2 methods
    summary = json.loads((out / "summary.json").read_text())
    assert summary["plan"]["seed"] == 7
    assert len(summary["summaries"]) == 2


def test_bench_plan_file_and_unknown_key(tmp_path):
    plan = tmp_path / "plan.txt"
    plan.write_text(
        "settings = variance-shift\na = 1.0\nb = 0.3\nn = 30\nreplicates = 1\n"
        "restarts = 2\nmethods = km\nseed = 3\n"
    )
    out = tmp_path / "bench"
    assert run_cli("bench", plan, "--threads", 1, "--output", out) == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("settings = mean-shift\nwavelength = 3\n")
    assert run_cli("bench", bad, "--output", tmp_path / "bench2") == 1


def test_bench_deterministic_bytes(tmp_path):
    args = ["bench", "--settings", "mean-shift", "--a-values", "1.0", "--b-values", "0.2",
            "--n", 24, "--replicates", 2, "--restarts", 2, "--methods", "akm:0,km",
            "--seed", 13]
    out1, out2 = tmp_path / "b1", tmp_path / "b2"
    assert run_cli(*args, "--threads", 1, "--output", out1) == 0
    assert run_cli(*args, "--threads", 2, "--output", out2) == 0
    for name in ("replicates.csv", "summary.csv", "summary.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_module_invocation_help():
    proc = subprocess.run(
        [sys.executable, "-m", "akmbicluster", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "fit" in proc.stdout and "bench" in proc.stdout


def test_unknown_flag_is_usage_error():
    assert run_cli("fit", "x.csv", "--k", 2, "--output", "y.json", "--frobnicate") == 1
