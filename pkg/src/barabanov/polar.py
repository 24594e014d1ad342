"""Plane norms stored as a gauge ``R(phi)`` on a uniform angular grid.

A norm is recovered from its gauge as ``||x|| = r * R(phi)`` where ``(r, phi)``
are the polar coordinates of ``x``; the unit sphere is the curve
``r = 1 / R(phi)``.  The grid has ``N + 1`` nodes ``phi_k = -pi + 2 pi k / N``,
so nodes ``0`` and ``N`` both sit at angle ``+-pi``; cyclic operations treat
them as one node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .linalg import MatrixSet

LookupMode = Literal["interp", "nearest"]
LOOKUP_MODES = ("interp", "nearest")

# H_i below this is treated as a zero image; the matrix contributes nothing there
EPS_ZERO = 1e-14
# tolerated antipodal mismatch of user-supplied gauges before symmetrization
EPS_SYM = 1e-9


def check_node_count(n: int) -> int:
    if int(n) != n or n < 8 or n % 2:
        raise ValueError(f"node count must be an even integer >= 8, got {n}")
    return int(n)


def grid_angles(n: int) -> np.ndarray:
    return -np.pi + 2.0 * np.pi * np.arange(n + 1) / n


def _close(values: np.ndarray) -> np.ndarray:
    """Append the periodic endpoint to ``N`` cyclic values."""
    return np.append(values, values[0])


@dataclass(frozen=True, eq=False)
class PolarNorm:
    """Gauge values ``R(phi_k)`` for ``k = 0..N``.

    Construction symmetrizes the values: the two copies of angle ``+-pi`` are
    averaged, and so is each antipodal pair ``k, k + N/2``.  Pass
    ``strict=True`` to refuse input whose antipodal mismatch exceeds
    ``EPS_SYM`` relative instead of silently repairing it.
    """

    values: np.ndarray
    strict: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        n = check_node_count(v.size - 1)
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError("gauge values must be finite and positive")
        cyc = v[:n].copy()
        cyc[0] = 0.5 * (v[0] + v[n])
        anti = np.roll(cyc, -n // 2)
        if self.strict and np.max(np.abs(cyc - anti)) > EPS_SYM * np.max(cyc):
            raise ValueError("gauge is not centrally symmetric")
        v = _close(0.5 * (cyc + anti))
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def euclidean(cls, n: int, scale: float = 1.0) -> "PolarNorm":
        return cls(np.full(check_node_count(n) + 1, float(scale)))

    @property
    def node_count(self) -> int:
        return self.values.size - 1

    @property
    def phi(self) -> np.ndarray:
        return grid_angles(self.node_count)

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.node_count

    def at_zero(self) -> float:
        return float(self.values[self.node_count // 2])

    def unit_sphere(self) -> np.ndarray:
        """Points of the unit sphere, shape ``(N + 1, 2)``; first equals last."""
        rad = 1.0 / self.values
        phi = self.phi
        pts = np.column_stack([rad * np.cos(phi), rad * np.sin(phi)])
        pts[-1] = pts[0]
        return pts

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class TransformTables:
    """Per-matrix radial stretch and image angle at every grid node.

    ``H[i, k]`` is the Euclidean length of ``A_i (cos phi_k, sin phi_k)``,
    ``Phi[i, k]`` its polar angle in ``[-pi, pi]``, ``position`` the same angle
    as a fractional node index in ``[0, N]`` and ``node_map`` that position
    rounded half-up and clamped to ``[0, N]``.
    """

    H: np.ndarray
    Phi: np.ndarray
    position: np.ndarray
    node_map: np.ndarray

    @property
    def node_count(self) -> int:
        return self.H.shape[1] - 1

    @property
    def r(self) -> int:
        return self.H.shape[0]


def build_transform_tables(matrix_set: MatrixSet, n: int) -> TransformTables:
    n = check_node_count(n)
    phi = grid_angles(n)
    c, s = np.cos(phi), np.sin(phi)
    mats = matrix_set.stack()
    x = mats[:, 0, 0, None] * c + mats[:, 0, 1, None] * s
    y = mats[:, 1, 0, None] * c + mats[:, 1, 1, None] * s
    H = np.hypot(x, y)
    Phi = np.arctan2(y, x)
    position = n * (np.pi + Phi) / (2.0 * np.pi)
    node_map = np.clip(np.floor(position + 0.5).astype(np.int64), 0, n)
    for arr in (H, Phi, position, node_map):
        arr.setflags(write=False)
    return TransformTables(H, Phi, position, node_map)


def lookup(values: np.ndarray, position: np.ndarray, mode: LookupMode = "interp") -> np.ndarray:
    """Gauge values at fractional node positions in ``[0, N]``."""
    n = values.size - 1
    if mode == "nearest":
        return values[np.clip(np.floor(position + 0.5).astype(np.int64), 0, n)]
    if mode != "interp":
        raise ValueError(f"unknown lookup mode {mode!r}")
    j = np.clip(np.floor(position).astype(np.int64), 0, n - 1)
    w = position - j
    return (1.0 - w) * values[j] + w * values[j + 1]


def evaluate(norm: PolarNorm, x, mode: LookupMode = "interp"):
    """Norm of a plane vector, or of each row of an ``(..., 2)`` array."""
    x = np.asarray(x, dtype=float)
    r = np.hypot(x[..., 0], x[..., 1])
    phi = np.arctan2(x[..., 1], x[..., 0])
    n = norm.node_count
    gauge = lookup(norm.values, n * (np.pi + phi) / (2.0 * np.pi), mode)
    out = np.where(r == 0.0, 0.0, r * gauge)
    return float(out) if out.ndim == 0 else out


def composite_R_star(
    norm: PolarNorm, tables: TransformTables, mode: LookupMode = "interp"
) -> np.ndarray:
    """Node-wise ``max_i H_i(phi) R(Phi_i(phi))``: the gauge of ``x -> max_i ||A_i x||``."""
    if tables.node_count != norm.node_count:
        raise ValueError("transform tables and norm use different grids")
    if mode == "nearest":
        images = norm.values[tables.node_map]
    else:
        images = lookup(norm.values, tables.position, mode)
    contrib = np.where(tables.H < EPS_ZERO, 0.0, tables.H * images)
    return contrib.max(axis=0)


def chord_factor(n: int) -> float:
    """``sin(dphi) / sin(2 dphi)``, which equals ``1 / (2 cos dphi)``."""
    d = 2.0 * np.pi / n
    return np.sin(d) / np.sin(2.0 * d)


def convexify(values: np.ndarray, until_stable: bool = False, max_passes: int = 100_000) -> np.ndarray:
    """Clip each node to the chord bound of its two neighbours.

    One pass computes ``v_k <- min(v_k, (v_{k-1} + v_{k+1}) * sin(dphi) / sin(2 dphi))``
    for every node from the *input* neighbours, cyclically.  A single pass can
    leave a node above the bound of its freshly clipped neighbours; with
    ``until_stable`` the pass repeats until nothing moves, giving a gauge
    whose discrete chord inequality holds everywhere.
    """
    v = np.asarray(values, dtype=float)
    n = v.size - 1
    c = chord_factor(n)
    cyc = v[:n]
    for _ in range(max_passes):
        nxt = np.minimum(cyc, c * (np.roll(cyc, 1) + np.roll(cyc, -1)))
        moved = np.max(cyc - nxt)
        cyc = nxt
        if not until_stable or moved <= 1e-15 * np.max(cyc):
            break
    return _close(cyc)


def chord_violation(values: np.ndarray) -> float:
    """Largest ``v_k - (v_{k-1} + v_{k+1}) / (2 cos dphi)`` over the grid."""
    v = np.asarray(values, dtype=float)
    n = v.size - 1
    cyc = v[:n]
    return float(np.max(cyc - chord_factor(n) * (np.roll(cyc, 1) + np.roll(cyc, -1))))


def rho_bounds(norm: PolarNorm, r_star: np.ndarray) -> tuple[float, float]:
    """``(min, max)`` of ``R*(phi_k) / R(phi_k)`` over the grid."""
    q = np.asarray(r_star) / norm.values
    return float(q.min()), float(q.max())


def relax_update(norm: PolarNorm, r_star: np.ndarray, gamma: float) -> PolarNorm:
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    return PolarNorm(np.maximum(norm.values, np.asarray(r_star) / gamma))


def normalize(norm: PolarNorm) -> PolarNorm:
    """Rescale so the gauge equals 1 at angle 0, i.e. ``||(1, 0)|| = 1``."""
    return PolarNorm(norm.values / norm.at_zero())


def eccentricity(a: PolarNorm, b: PolarNorm) -> float:
    """``max(R_a / R_b) / min(R_a / R_b)`` over the grid; 1 iff proportional."""
    if a.node_count != b.node_count:
        raise ValueError("norms live on different grids")
    q = a.values / b.values
    return float(q.max() / q.min())
