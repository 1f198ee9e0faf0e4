import json

import numpy as np
import pytest

from akmbicluster.engine import AkmConfig, akm_fit
from akmbicluster.io import (
    DataFormatError,
    read_labels_csv,
    read_matrix_csv,
    read_result_document,
    result_document,
    verify_result_document,
    write_json,
    write_labels_csv,
    write_matrix_csv,
)
from akmbicluster.matrix import DataMatrix


def test_matrix_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(50)
    values = np.concatenate(
        [
            rng.standard_normal(40),
            rng.standard_normal(40) * 1e12,
            rng.standard_normal(40) * 1e-12,
            np.array([0.0, -0.0, 1.0 / 3.0, np.pi]),
        ]
    )
    X = DataMatrix(values.reshape(4, 31))
    path = tmp_path / "m.csv"
    write_matrix_csv(path, X)
    back = read_matrix_csv(path)
    assert np.array_equal(back.values, X.values)
    # writing again produces identical bytes
    path2 = tmp_path / "m2.csv"
    write_matrix_csv(path2, back)
    assert path.read_bytes() == path2.read_bytes()


def test_matrix_header_auto_detected(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("gene_a,gene_b\n1.5,2.5\n3.5,4.5\n")
    X = read_matrix_csv(path)
    assert X.values.tolist() == [[1.5, 2.5], [3.5, 4.5]]


def test_matrix_ragged_rows_named(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("1,2,3\n4,5\n")
    with pytest.raises(DataFormatError, match="row 2"):
        read_matrix_csv(path)


def test_matrix_non_numeric_cell_named(tmp_path):
    path = tmp_path / "n.csv"
    path.write_text("1,2\n3,oops\n")
    with pytest.raises(DataFormatError, match="row 2, column 2"):
        read_matrix_csv(path)


def test_matrix_rejects_nan_literal(tmp_path):
    path = tmp_path / "nan.csv"
    path.write_text("1,2\nnan,4\n")
    with pytest.raises(DataFormatError, match="row 2, column 1"):
        read_matrix_csv(path)


def test_matrix_empty_file_rejected(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("")
    with pytest.raises(DataFormatError):
        read_matrix_csv(path)


def test_labels_round_trip(tmp_path):
    path = tmp_path / "labels.csv"
    write_labels_csv(path, [1, 2, 2, 3])
    assert read_labels_csv(path).tolist() == [1, 2, 2, 3]


def test_labels_reject_bad_values(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1\n0\n")
    with pytest.raises(DataFormatError):
        read_labels_csv(path)
    path.write_text("1\nx\n2\n")
    with pytest.raises(DataFormatError, match="row 2"):
        read_labels_csv(path)


def fit_document(seed=3):
    rng = np.random.default_rng(seed)
    X = DataMatrix(rng.standard_normal((8, 6)))
    cfg = AkmConfig(k=2, lam=0.1, restarts=3, seed=seed)
    log: list = []
    result = akm_fit(X, cfg, restart_log=log)
    return X, cfg, result_document(result, cfg, log)


def test_result_document_round_trip(tmp_path):
    X, cfg, doc = fit_document()
    path = tmp_path / "result.json"
    write_json(path, doc)
    loaded = read_result_document(path)
    assert loaded == doc
    verify_result_document(loaded, X)


def test_result_document_detects_tampered_loss(tmp_path):
    X, cfg, doc = fit_document()
    doc["loss"]["total"] = doc["loss"]["total"] + 0.5
    with pytest.raises(DataFormatError, match="does not match"):
        verify_result_document(doc, X)


def test_result_document_rejects_invalid_labels(tmp_path):
    _, _, doc = fit_document()
    doc["row_labels"] = [1] * len(doc["row_labels"])  # cluster 2 unused
    path = tmp_path / "broken.json"
    write_json(path, doc)
    with pytest.raises(DataFormatError):
        read_result_document(path)


def test_result_document_rejects_wrong_format(tmp_path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"format": "something-else"}))
    with pytest.raises(DataFormatError):
        read_result_document(path)
