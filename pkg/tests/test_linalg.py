import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from barabanov import MatrixSet, induced_two_norm, irreducibility_check, product_chain, rotation, spectral_radius
from barabanov.linalg import Irreducibility

from conftest import A1, A2, GOLDEN

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
mat2 = arrays(np.float64, (2, 2), elements=finite)
nonzero_mat2 = mat2.filter(lambda a: np.max(np.abs(a)) > 1e-3)


def test_spectral_radius_examples():
    assert spectral_radius(np.eye(2)) == 1.0
    assert spectral_radius([[2, 1], [1, 1]]) == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-15)
    assert spectral_radius(rotation(0.7)) == pytest.approx(1.0, rel=1e-15)


def test_spectral_radius_degenerate_cases():
    assert spectral_radius(np.zeros((2, 2))) == 0.0
    assert spectral_radius([[0, 1], [0, 0]]) == 0.0
    # nearly cancelling roots: eigenvalues 1e8 and 1e-8
    assert spectral_radius([[1e8, 0], [0, 1e-8]]) == pytest.approx(1e8, rel=1e-15)
    assert spectral_radius(np.diag([-3.0, 2.0])) == 3.0


@given(mat2)
def test_spectral_radius_matches_general_eigensolver(a):
    expected = np.max(np.abs(np.linalg.eigvals(a)))
    assert spectral_radius(a) == pytest.approx(expected, rel=1e-6, abs=1e-6 * max(1.0, np.abs(a).max()))


def test_spectral_radius_is_vectorized():
    stack = np.stack([np.eye(2), 2 * rotation(0.3), np.diag([0.5, -4.0])])
    np.testing.assert_allclose(spectral_radius(stack), [1.0, 2.0, 4.0], rtol=1e-15)


def test_induced_two_norm_examples():
    assert induced_two_norm(np.eye(2)) == 1.0
    assert induced_two_norm([[1, 1], [0, 1]]) == pytest.approx(GOLDEN, rel=1e-15)
    assert induced_two_norm(np.diag([3.0, -2.0])) == pytest.approx(3.0, rel=1e-15)


@given(mat2)
def test_induced_two_norm_matches_svd(a):
    expected = np.linalg.norm(a, 2)
    assert induced_two_norm(a) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@given(mat2, st.floats(-100, 100, allow_nan=False))
def test_spectral_radius_homogeneous(a, c):
    lhs = spectral_radius(c * a)
    rhs = abs(c) * spectral_radius(a)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9 * max(1.0, abs(c) * np.abs(a).max()))


@given(mat2)
def test_spectral_radius_below_two_norm(a):
    assert spectral_radius(a) <= induced_two_norm(a) * (1 + 1e-12) + 1e-300


def test_product_chain_order(example1):
    # A2 applied after A1
    np.testing.assert_array_equal(product_chain(example1, [0, 1]), A2 @ A1)
    np.testing.assert_array_equal(product_chain(example1, [0, 1]), [[1, 1], [1, 2]])
    np.testing.assert_array_equal(product_chain(example1, [1, 0]), [[2, 1], [1, 1]])


def test_product_chain_single_and_identity(example1):
    np.testing.assert_array_equal(product_chain(example1, [1]), A2)
    ids = MatrixSet.of(np.eye(2), np.eye(2))
    np.testing.assert_array_equal(product_chain(ids, [0, 1, 1, 0]), np.eye(2))
    np.testing.assert_array_equal(product_chain(example1, []), np.eye(2))


def test_product_chain_bad_index(example1):
    with pytest.raises(IndexError):
        product_chain(example1, [0, 2])
    with pytest.raises(IndexError):
        product_chain(example1, [-1])


@given(st.lists(mat2, min_size=3, max_size=3).filter(lambda ms: all(np.any(m) for m in ms)))
def test_product_chain_associative(ms):
    s = MatrixSet(tuple(ms))
    two = product_chain(s, [0, 1])
    three = product_chain(s, [0, 1, 2])
    np.testing.assert_allclose(s[2] @ two, three, rtol=1e-12, atol=1e-9)


def test_matrix_set_validation():
    with pytest.raises(ValueError):
        MatrixSet(())
    with pytest.raises(ValueError, match="zero matrix"):
        MatrixSet.of(np.eye(2), np.zeros((2, 2)))
    with pytest.raises(ValueError, match="finite"):
        MatrixSet.of([[1, np.nan], [0, 1]])
    with pytest.raises(ValueError, match="2x2"):
        MatrixSet.of(np.eye(3))
    s = MatrixSet.of([1, 2, 3, 4])
    np.testing.assert_array_equal(s[0], [[1, 2], [3, 4]])
    assert s.r == len(s) == 1


@pytest.mark.parametrize(
    "mats, verdict",
    [
        ([A1, A2], Irreducibility.IRREDUCIBLE),
        ([np.diag([2.0, 1.0]), np.diag([3.0, 1.0])], Irreducibility.REDUCIBLE),
        ([0.9 * rotation(1.0)], Irreducibility.IRREDUCIBLE),
        ([np.diag([2.0, 0.5])], Irreducibility.REDUCIBLE),
        ([np.eye(2), 3 * np.eye(2)], Irreducibility.REDUCIBLE),
        ([A1, np.eye(2)], Irreducibility.REDUCIBLE),
        ([A1, [[2.0, 5.0], [0.0, -1.0]]], Irreducibility.REDUCIBLE),
    ],
)
def test_irreducibility_verdicts(mats, verdict):
    assert irreducibility_check(MatrixSet(tuple(mats))).verdict is verdict


def test_reducible_direction_is_common_eigenvector():
    # both upper triangular: e1 is shared
    v = irreducibility_check([A1, [[2.0, 5.0], [0.0, -1.0]]])
    assert abs(v.direction[1]) < 1e-12


def test_irreducibility_inconclusive_near_tolerance():
    # A2 rotates e1 by an angle ~ 3e-9, right at the tolerance
    eps = 3e-9
    near = np.array([[1.0, 0.0], [eps, 1.0]])
    v = irreducibility_check([A1, near])
    assert v.verdict is Irreducibility.INCONCLUSIVE
    assert irreducibility_check([A1, np.array([[1.0, 0.0], [1e-12, 1.0]])]).reducible


@settings(max_examples=50)
@given(
    st.lists(nonzero_mat2, min_size=1, max_size=3),
    st.lists(st.floats(0.01, 100) | st.floats(-100, -0.01), min_size=3, max_size=3),
)
def test_irreducibility_scale_invariant(ms, scales):
    s = MatrixSet(tuple(ms))
    scaled = MatrixSet(tuple(c * m for c, m in zip(scales, ms)))
    a, b = irreducibility_check(s), irreducibility_check(scaled)
    # verdicts right at a tolerance boundary may flip on rounding
    if a.margin is not None and 1e-11 < a.margin < 1e-7:
        return
    assert a.verdict is b.verdict
