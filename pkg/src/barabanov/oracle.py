"""Brute-force bounds on the joint spectral radius from k-fold products.

For every depth ``k``::

    max rho(P)^(1/k)  <=  rho(A)  <=  max ||P||_2^(1/k)

over all products ``P`` of ``k`` matrices from the set.  These bounds share
no code with the relaxation iteration and serve as its independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import MatrixSet, induced_two_norm, spectral_radius

DEFAULT_CAP = 2**20
SAMPLE_BATCH = 65536


class CapExceededError(ValueError):
    """Exhaustive enumeration would exceed the product cap."""


def _check(matrix_set: MatrixSet, k: int, cap: int) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"depth must be a positive integer, got {k}")
    count = matrix_set.r**k
    if count > cap:
        raise CapExceededError(
            f"{matrix_set.r}^{k} = {count} products exceed the cap of {cap}; use sampling"
        )
    return count


def all_products(matrix_set: MatrixSet, k: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Every k-fold product, shape ``(r**k, 2, 2)``.

    Built one level at a time from the ``(k-1)``-fold products, so each level
    costs one batched multiplication.  Row ``j`` corresponds to the chain whose
    base-``r`` digits (most significant first) list the matrices from the
    last-applied to the first-applied.
    """
    _check(matrix_set, k, cap)
    mats = matrix_set.stack()
    prods = mats
    for _ in range(k - 1):
        prods = (mats[:, None] @ prods[None]).reshape(-1, 2, 2)
    return prods


def sampled_products(matrix_set: MatrixSet, k: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    mats = matrix_set.stack()
    idx = rng.integers(0, matrix_set.r, size=(samples, k))
    prods = mats[idx[:, 0]]
    for j in range(1, k):
        prods = mats[idx[:, j]] @ prods
    return prods


def _root(x: np.ndarray, k: int) -> float:
    return float(np.max(x)) ** (1.0 / k)


def lower_bound(matrix_set: MatrixSet, k: int, cap: int = DEFAULT_CAP) -> float:
    return _root(spectral_radius(all_products(matrix_set, k, cap)), k)


def upper_bound(matrix_set: MatrixSet, k: int, cap: int = DEFAULT_CAP) -> float:
    return _root(induced_two_norm(all_products(matrix_set, k, cap)), k)


def trace_estimate(matrix_set: MatrixSet, k: int, cap: int = DEFAULT_CAP) -> float:
    """``max |tr P|^(1/k)``: tends to rho(A) along a subsequence, not a bound."""
    p = all_products(matrix_set, k, cap)
    return _root(np.abs(p[:, 0, 0] + p[:, 1, 1]), k)


@dataclass(frozen=True)
class BoundsBracket:
    depth: int
    lower: float
    # None in sampled mode, where no valid upper bound exists
    upper: float | None
    trace_estimate: float
    products_evaluated: int
    sampled: bool = False
    seed: int | None = None

    def contains(self, value: float, slack: float = 0.0) -> bool:
        hi = np.inf if self.upper is None else self.upper
        return self.lower - slack <= value <= hi + slack

    def as_dict(self) -> dict:
        return {
            "depth": self.depth,
            "lower": self.lower,
            "upper": self.upper,
            "trace_estimate": self.trace_estimate,
            "products_evaluated": self.products_evaluated,
            "sampled": self.sampled,
            "seed": self.seed,
        }


def bracket(
    matrix_set: MatrixSet,
    k: int,
    cap: int = DEFAULT_CAP,
    sample: bool = False,
    seed: int = 0,
) -> BoundsBracket:
    """Lower, upper and trace estimates at depth ``k``.

    When ``r**k`` exceeds ``cap`` and ``sample`` is set, ``cap`` random chains
    are drawn instead; the result then only carries a heuristic lower bound.
    """
    try:
        prods = all_products(matrix_set, k, cap)
    except CapExceededError:
        if not sample:
            raise
        lo = tr = 0.0
        done = 0
        rng = np.random.default_rng(seed)
        for start in range(0, cap, SAMPLE_BATCH):
            size = min(SAMPLE_BATCH, cap - start)
            p = sampled_products(matrix_set, k, size, rng)
            lo = max(lo, float(np.max(spectral_radius(p))))
            tr = max(tr, float(np.max(np.abs(p[:, 0, 0] + p[:, 1, 1]))))
            done += size
        return BoundsBracket(k, lo ** (1 / k), None, tr ** (1 / k), done, True, seed)

    lo = _root(spectral_radius(prods), k)
    hi = _root(induced_two_norm(prods), k)
    tr = _root(np.abs(prods[:, 0, 0] + prods[:, 1, 1]), k)
    # rho(P) <= ||P|| holds per product; rounding may flip it at equality
    assert lo <= hi * (1 + 1e-12), (lo, hi)
    return BoundsBracket(k, lo, max(lo, hi), tr, len(prods), False, None)
