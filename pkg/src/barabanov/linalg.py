"""Closed-form kernels for real 2x2 matrices.

Everything here accepts either a single ``(2, 2)`` array or a stack of shape
``(..., 2, 2)``; the stacked form is what the product enumeration in
:mod:`barabanov.oracle` relies on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# |sin| of the angle between two directions below which they are identified
DIRECTION_TOL = 1e-9


class ReducibleSetError(ValueError):
    """The matrix set has a common invariant line."""


def as_matrix2(a) -> np.ndarray:
    """Validate ``a`` as a finite real 2x2 matrix and return a float copy."""
    m = np.array(a, dtype=float)
    if m.shape == (4,):
        m = m.reshape(2, 2)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class MatrixSet:
    """An ordered, non-empty family of nonzero real 2x2 matrices."""

    matrices: tuple

    def __post_init__(self):
        mats = tuple(as_matrix2(a) for a in self.matrices)
        if not mats:
            raise ValueError("a matrix set needs at least one matrix")
        for i, a in enumerate(mats):
            if not np.any(a):
                raise ValueError(f"matrix {i} is the zero matrix")
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def of(cls, *matrices) -> "MatrixSet":
        return cls(tuple(matrices))

    @property
    def r(self) -> int:
        return len(self.matrices)

    def stack(self) -> np.ndarray:
        """The matrices as one ``(r, 2, 2)`` array."""
        return np.stack(self.matrices)

    def scaled(self, c: float) -> "MatrixSet":
        return MatrixSet(tuple(c * a for a in self.matrices))

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]


def _trace_det(a):
    a = np.asarray(a, dtype=float)
    tr = a[..., 0, 0] + a[..., 1, 1]
    det = a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    return tr, det


def _rho_from_trace_det(tr, det):
    half = 0.5 * tr
    disc = half * half - det
    real = disc >= 0
    # sign-aware root avoids cancellation; the partner root is det / q
    q = half + np.copysign(np.sqrt(np.where(real, disc, 0.0)), half)
    safe_q = np.where(q == 0.0, 1.0, q)
    partner = np.where(q == 0.0, 0.0, det / safe_q)
    rho_real = np.maximum(np.abs(q), np.abs(partner))
    # complex pair: |lambda|^2 = det
    rho_complex = np.sqrt(np.where(real, 0.0, det))
    return np.where(real, rho_real, rho_complex)


def _rescaled(a):
    """Split ``a`` into ``scale * unit`` with max-abs entry 1, guarding under/overflow."""
    a = np.asarray(a, dtype=float)
    scale = np.max(np.abs(a), axis=(-2, -1))
    safe = np.where(scale == 0.0, 1.0, scale)
    return a / safe[..., None, None], scale


def spectral_radius(a):
    """Largest eigenvalue modulus of a 2x2 matrix (or a stack of them)."""
    unit, scale = _rescaled(a)
    tr, det = _trace_det(unit)
    rho = scale * _rho_from_trace_det(tr, det)
    return float(rho) if np.ndim(rho) == 0 else rho


def induced_two_norm(a):
    """Largest singular value, as the square root of ``spectral_radius(A^T A)``."""
    unit, scale = _rescaled(a)
    gram = np.swapaxes(unit, -1, -2) @ unit
    tr, det = _trace_det(gram)
    # A^T A is symmetric PSD; clamp the tiny negative discriminants rounding produces
    half = 0.5 * tr
    disc = np.maximum(half * half - det, 0.0)
    top = half + np.sqrt(disc)
    out = scale * np.sqrt(np.maximum(top, 0.0))
    return float(out) if np.ndim(out) == 0 else out


def product_chain(matrix_set: MatrixSet, indices: Sequence[int]) -> np.ndarray:
    """Return ``A[i_n] @ ... @ A[i_2] @ A[i_1]`` for 0-based ``indices``.

    The first index is the rightmost factor, i.e. the matrix applied first.
    An empty chain gives the identity.
    """
    out = np.eye(2)
    for i in indices:
        if not 0 <= i < matrix_set.r:
            raise IndexError(f"matrix index {i} out of range for a set of {matrix_set.r}")
        out = matrix_set[i] @ out
    return out


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------


class Irreducibility(str, enum.Enum):
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class IrreducibilityVerdict:
    verdict: Irreducibility
    # unit vector spanning the (near-)common invariant line, if any
    direction: tuple | None = None
    # worst |sin| misalignment of the best candidate direction
    margin: float | None = None

    @property
    def reducible(self) -> bool:
        return self.verdict is Irreducibility.REDUCIBLE

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "direction": None if self.direction is None else list(self.direction),
            "margin": self.margin,
        }


def _is_scalar(a: np.ndarray) -> bool:
    half = 0.5 * (a[0, 0] + a[1, 1])
    return np.max(np.abs(a - half * np.eye(2))) <= 1e-12 * np.max(np.abs(a))


def _real_eigendirections(a: np.ndarray) -> list[np.ndarray]:
    tr, det = _trace_det(a)
    half = 0.5 * tr
    disc = half * half - det
    if disc < 0:
        return []
    root = np.sqrt(disc)
    dirs = []
    for lam in {half + root, half - root}:
        rows = a - lam * np.eye(2)
        row = rows[np.argmax(np.hypot(rows[:, 0], rows[:, 1]))]
        v = np.array([-row[1], row[0]])
        v = v / np.hypot(*v)
        if all(abs(_sin_between(v, d)) > DIRECTION_TOL for d in dirs):
            dirs.append(v)
    return dirs


def _sin_between(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.hypot(*u), np.hypot(*v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float((u[0] * v[1] - u[1] * v[0]) / (nu * nv))


def irreducibility_check(
    matrix_set: MatrixSet | Iterable, tol: float = DIRECTION_TOL
) -> IrreducibilityVerdict:
    """Decide whether a set of 2x2 matrices shares a real eigenvector.

    In the plane the only proper invariant subspaces are lines, so the set is
    reducible exactly when some direction is an eigenvector of every matrix.
    A candidate whose misalignment lands within a factor 10 of ``tol`` on
    either side is reported as inconclusive.
    """
    if not isinstance(matrix_set, MatrixSet):
        matrix_set = MatrixSet(tuple(matrix_set))
    constraining = [a for a in matrix_set if not _is_scalar(a)]
    if not constraining:
        return IrreducibilityVerdict(Irreducibility.REDUCIBLE, (1.0, 0.0), 0.0)

    candidates = _real_eigendirections(constraining[0])
    if not candidates:
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE)

    best_dir, best = None, np.inf
    for v in candidates:
        worst = max(abs(_sin_between(v, a @ v)) for a in constraining)
        if worst < best:
            best_dir, best = v, worst

    direction = tuple(float(x) for x in best_dir)
    if best < tol / 10:
        return IrreducibilityVerdict(Irreducibility.REDUCIBLE, direction, best)
    if best < tol * 10:
        return IrreducibilityVerdict(Irreducibility.INCONCLUSIVE, direction, best)
    return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE, None, best)
