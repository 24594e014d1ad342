import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barabanov import MatrixSet, product_chain, rotation
from barabanov import oracle
from barabanov.oracle import CapExceededError, bracket, lower_bound, trace_estimate, upper_bound

from conftest import GOLDEN


def brute(s, k):
    """Reference enumeration: explicit chains, numpy eigvals and SVD."""
    lo = hi = tr = 0.0
    for chain in itertools.product(range(s.r), repeat=k):
        p = product_chain(s, chain)
        lo = max(lo, np.max(np.abs(np.linalg.eigvals(p))))
        hi = max(hi, np.linalg.norm(p, 2))
        tr = max(tr, abs(np.trace(p)))
    return lo ** (1 / k), hi ** (1 / k), tr ** (1 / k)


def test_lower_bound_examples(example1):
    assert lower_bound(example1, 1) == pytest.approx(1.0, abs=1e-12)
    assert lower_bound(example1, 2) == pytest.approx(math.sqrt((3 + math.sqrt(5)) / 2), rel=1e-14)
    assert lower_bound(example1, 2) == pytest.approx(GOLDEN, rel=1e-14)
    diag = MatrixSet.of(np.diag([2.0, 0.5]))
    for k in (1, 3, 7):
        assert lower_bound(diag, k) == pytest.approx(2.0, rel=1e-14)


def test_upper_bound_examples(example1):
    assert upper_bound(example1, 1) == pytest.approx(GOLDEN, rel=1e-14)
    assert upper_bound(MatrixSet.of(np.eye(2)), 4) == 1.0
    for k in (1, 2, 5):
        assert upper_bound(MatrixSet.of(-0.6 * rotation(2.2)), k) == pytest.approx(0.6, rel=1e-13)


def test_trace_estimate_examples(example1):
    assert trace_estimate(example1, 2) == pytest.approx(math.sqrt(3), rel=1e-14)
    assert trace_estimate(MatrixSet.of(np.eye(2)), 1) == 2.0
    assert trace_estimate(MatrixSet.of(np.diag([2.0, 0.5])), 4) == pytest.approx((2**4 + 2**-4) ** 0.25, rel=1e-14)


def test_bracket_examples(example1):
    b = bracket(example1, 2)
    assert b.lower == pytest.approx(GOLDEN, rel=1e-14)
    assert b.upper <= 1.6181
    assert b.trace_estimate == pytest.approx(math.sqrt(3), rel=1e-14)
    assert b.products_evaluated == 4 and not b.sampled

    b = bracket(MatrixSet.of(np.eye(2)), 3)
    assert (b.lower, b.upper) == (1.0, 1.0)
    assert b.trace_estimate == pytest.approx(2 ** (1 / 3))

    b = bracket(MatrixSet.of(np.diag([2.0, 1.0]), np.diag([1.0, 2.0])), 1)
    assert (b.lower, b.upper, b.trace_estimate) == (2.0, 2.0, 3.0)


@pytest.mark.parametrize("k", [1, 2, 3, 6])
def test_matches_reference_enumeration(example2, k):
    b = bracket(example2, k)
    np.testing.assert_allclose((b.lower, b.upper, b.trace_estimate), brute(example2, k), rtol=1e-12)


def test_product_order_matches_chain_convention(example2):
    prods = oracle.all_products(example2, 3)
    # row index digits, most significant first, list matrices last-applied first
    for j, digits in enumerate(itertools.product(range(3), repeat=3)):
        np.testing.assert_allclose(prods[j], product_chain(example2, digits[::-1]), rtol=1e-14)


def test_cap_and_sampling(example2):
    with pytest.raises(CapExceededError):
        lower_bound(example2, 5, cap=100)
    b = bracket(example2, 12, cap=5000, sample=True, seed=3)
    assert b.sampled and b.upper is None and b.products_evaluated == 5000 and b.seed == 3
    assert b.lower <= 1.3482  # a sampled lower bound is still a lower bound
    again = bracket(example2, 12, cap=5000, sample=True, seed=3)
    assert again == b
    with pytest.raises(CapExceededError):
        bracket(example2, 12, cap=5000)
    with pytest.raises(ValueError):
        bracket(example2, 0)


def random_set(seed):
    rng = np.random.default_rng(seed)
    return MatrixSet(tuple(rng.uniform(-2, 2, (2, 2)) for _ in range(rng.integers(1, 4))))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_every_lower_below_every_upper(seed):
    s = random_set(seed)
    lows = [lower_bound(s, k) for k in range(1, 7)]
    ups = [upper_bound(s, k) for k in range(1, 7)]
    assert max(lows) <= min(ups) * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_upper_bound_improves_with_doubling(seed, k):
    s = random_set(seed)
    assert upper_bound(s, 2 * k) <= upper_bound(s, k) + 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 20))
def test_scale_equivariance(seed, c):
    s = random_set(seed)
    a, b = bracket(s, 4), bracket(s.scaled(c), 4)
    assert b.lower == pytest.approx(c * a.lower, rel=1e-12, abs=1e-300)
    assert b.upper == pytest.approx(c * a.upper, rel=1e-12)
    assert b.trace_estimate == pytest.approx(c * a.trace_estimate, rel=1e-12, abs=1e-300)
