import numpy as np
import pytest

from akmbicluster.matrix import (
    DataMatrix,
    IndexSet,
    Partition,
    frobenius_sq,
    project,
    submatrix,
    transpose,
)


def test_project_selects_subvector():
    x = [1.0, 3.0, 4.0, 7.0]
    assert project(x, IndexSet([1, 3], 4)).tolist() == [1.0, 4.0]
    assert project(x, IndexSet([2, 4], 4)).tolist() == [3.0, 7.0]


def test_project_identity_and_singleton():
    x = [1.0, 3.0, 4.0, 7.0]
    assert project(x, IndexSet([1, 2, 3, 4], 4)).tolist() == x
    assert project([5.0, 6.0], IndexSet([2], 2)).tolist() == [6.0]


def test_project_length_matches_index_set():
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = int(rng.integers(1, 10))
        x = rng.standard_normal(m)
        size = int(rng.integers(1, m + 1))
        picks = np.sort(rng.choice(m, size=size, replace=False)) + 1
        out = project(x, IndexSet(picks, m))
        assert out.shape == (size,)
        assert np.array_equal(out, x[picks - 1])


def test_project_rejects_wrong_length_vector():
    with pytest.raises(ValueError):
        project([1.0, 2.0], IndexSet([1], 3))


def test_transpose_small_cases():
    X = DataMatrix([[1, 2], [3, 4]])
    assert transpose(X).values.tolist() == [[1, 3], [2, 4]]
    row = DataMatrix([[1, 2, 3]])
    assert transpose(row).shape == (3, 1)


def test_transpose_is_involution_bit_exact():
    rng = np.random.default_rng(1)
    X = DataMatrix(rng.standard_normal((5, 7)))
    back = transpose(transpose(X))
    assert np.array_equal(back.values, X.values)


def test_frobenius_sq_examples():
    assert frobenius_sq(DataMatrix(np.zeros((3, 3)))) == 0.0
    assert frobenius_sq(DataMatrix([[1, 2], [3, 4]])) == 30.0
    assert frobenius_sq(DataMatrix([[1, 0], [0, 1]])) == 2.0


def test_frobenius_sq_transpose_invariant():
    rng = np.random.default_rng(2)
    X = DataMatrix(rng.standard_normal((4, 6)))
    assert frobenius_sq(X) == pytest.approx(frobenius_sq(transpose(X)), rel=1e-15)


def test_frobenius_blocks_tile_to_total():
    rng = np.random.default_rng(3)
    X = DataMatrix(rng.standard_normal((8, 9)))
    J = Partition([1, 2, 3, 1, 2, 3, 1, 2])
    I = Partition([1, 1, 2, 2, 3, 3, 1, 2, 3])
    total = 0.0
    for r in range(1, 4):
        for c in range(1, 4):
            total += frobenius_sq(submatrix(X, J.index_set(r), I.index_set(c)))
    assert total == pytest.approx(frobenius_sq(X), rel=1e-12)


def test_submatrix_examples():
    X = DataMatrix([[1, 2], [3, 4]])
    assert submatrix(X, IndexSet([1], 2), IndexSet([2], 2)).tolist() == [[2]]
    assert submatrix(X, IndexSet([1, 2], 2), IndexSet([1, 2], 2)).tolist() == [[1, 2], [3, 4]]
    Y = DataMatrix([[1, 2, 3], [4, 5, 6]])
    assert submatrix(Y, IndexSet([2], 2), IndexSet([1, 3], 3)).tolist() == [[4, 6]]


def test_data_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        DataMatrix([[1.0, float("nan")]])
    with pytest.raises(ValueError):
        DataMatrix([[1.0, float("inf")]])
    with pytest.raises(ValueError):
        DataMatrix(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        DataMatrix([1.0, 2.0])


def test_data_matrix_is_readonly():
    X = DataMatrix([[1.0, 2.0]])
    with pytest.raises(ValueError):
        X.values[0, 0] = 9.0


def test_index_set_validation():
    with pytest.raises(ValueError):
        IndexSet([], 4)
    with pytest.raises(ValueError):
        IndexSet([0, 1], 4)
    with pytest.raises(ValueError):
        IndexSet([1, 5], 4)
    with pytest.raises(ValueError):
        IndexSet([2, 2], 4)
    with pytest.raises(ValueError):
        IndexSet([3, 1], 4)


def test_partition_validation_and_groups():
    P = Partition([2, 1, 2, 3])
    assert P.k == 3
    assert P.group(2).tolist() == [0, 2]
    assert P.index_set(2).indices == (1, 3)
    assert P.cluster_sizes().tolist() == [1, 2, 1]
    with pytest.raises(ValueError):
        Partition([1, 1, 3])  # label 2 unused
    with pytest.raises(ValueError):
        Partition([0, 1])
    with pytest.raises(ValueError):
        Partition([1, 2], k=1)


def test_partition_equality():
    assert Partition([1, 2, 1]) == Partition([1, 2, 1])
    assert Partition([1, 2, 1]) != Partition([2, 1, 2])
    assert Partition([1, 2], k=2) != Partition([1, 2, 2], k=2)
