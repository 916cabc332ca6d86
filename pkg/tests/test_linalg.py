import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from jldp.errors import IngestionError, InvalidMatrixError
from jldp.linalg import (
    as_matrix,
    log_pseudo_determinant,
    matrix_to_csv,
    parse_matrix_csv,
    pinv,
    pseudo_determinant,
    pseudo_inverse,
    rank_tolerance,
    svd,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


# -- oracles -----------------------------------------------------------------

def test_identity_singular_values():
    f = svd(np.eye(3))
    np.testing.assert_allclose(f.singular_values, [1, 1, 1])
    assert f.numeric_rank == 3


def test_diagonal_rank_deficient():
    f = svd(np.diag([3.0, 2.0, 0.0]))
    np.testing.assert_allclose(f.singular_values, [3, 2, 0], atol=1e-15)
    assert f.numeric_rank == 2
    assert pseudo_determinant(f) == pytest.approx(6.0)


def test_single_edge_row_has_norm_sqrt2():
    f = svd(np.array([[1.0, -1.0]]))
    np.testing.assert_allclose(f.singular_values, [np.sqrt(2)])


def test_pinv_diagonal():
    np.testing.assert_allclose(pseudo_inverse(svd(np.diag([2.0, 4.0]))), np.diag([0.5, 0.25]))


def test_pinv_zero_matrix():
    f = svd(np.zeros((3, 3)))
    np.testing.assert_array_equal(pseudo_inverse(f), np.zeros((3, 3)))
    assert f.numeric_rank == 0
    assert pseudo_determinant(f) == 1.0


def test_pinv_single_edge_laplacian():
    l = np.array([[1.0, -1.0], [-1.0, 1.0]])
    np.testing.assert_allclose(pseudo_inverse(svd(l)), 0.25 * l, atol=1e-15)


def test_pdet_identity_and_k3():
    assert pseudo_determinant(svd(np.eye(5))) == pytest.approx(1.0)
    k3 = 3 * np.eye(3) - np.ones((3, 3))
    assert pseudo_determinant(svd(k3)) == pytest.approx(9.0)


def test_rank_tolerance_floor():
    assert rank_tolerance(np.array([0.0])) == 1e-12
    assert rank_tolerance(np.array([1e6, 1.0])) == pytest.approx(1e-4)


def test_rejects_nonfinite():
    with pytest.raises(InvalidMatrixError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(InvalidMatrixError):
        as_matrix(np.zeros((0, 3)))


def test_general_rectangular_svd():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((5, 3))
    f = svd(m)
    assert f.u.shape == (5, 5) and f.v.shape == (3, 3)
    np.testing.assert_allclose(f.reconstruct(), m, atol=1e-12)
    np.testing.assert_allclose(f.singular_values, np.linalg.svd(m, compute_uv=False))


# -- properties --------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_svd_contract(m):
    f = svd(m)
    assert np.all(np.diff(f.singular_values) <= 1e-12)
    np.testing.assert_allclose(f.u.T @ f.u, np.eye(f.u.shape[0]), atol=1e-10)
    np.testing.assert_allclose(f.v.T @ f.v, np.eye(f.v.shape[0]), atol=1e-10)
    scale = max(1.0, np.linalg.norm(m))
    assert np.linalg.norm(f.reconstruct() - m) <= 1e-9 * scale
    assert f.numeric_rank == int(np.sum(f.singular_values > rank_tolerance(f.singular_values)))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_penrose_identity(m):
    p = pseudo_inverse(svd(m))
    scale = max(1.0, np.abs(m).max())
    np.testing.assert_allclose(m @ p @ m, m, atol=1e-8 * scale)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (6, 4), elements=finite))
def test_psd_pinv_is_psd(b):
    p = b @ b.T
    f = svd(p)
    assert np.all(f.singular_values >= -1e-10)
    q = pseudo_inverse(f)
    assert np.linalg.eigvalsh(0.5 * (q + q.T)).min() >= -1e-8 * max(1.0, np.abs(q).max())


def test_double_pinv_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        m = rng.standard_normal((6, 6))
        np.testing.assert_allclose(pinv(pinv(m)), m, atol=1e-8)


@given(st.floats(0.1, 10), st.integers(1, 8))
def test_pdet_scaled_identity(c, n):
    assert log_pseudo_determinant(svd(c * np.eye(n))) == pytest.approx(n * np.log(c), abs=1e-10)


# -- CSV ---------------------------------------------------------------------

@settings(max_examples=50)
@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)),
              elements=st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)))
def test_csv_roundtrip_bit_identical(m):
    back = parse_matrix_csv(matrix_to_csv(m, header="k=v"))
    assert back.tobytes() == m.tobytes()


def test_csv_errors():
    with pytest.raises(IngestionError):
        parse_matrix_csv("1,2\n3\n")
    with pytest.raises(IngestionError):
        parse_matrix_csv("# only a header\n")
    with pytest.raises(IngestionError):
        parse_matrix_csv("1,abc\n")
