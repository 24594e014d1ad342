"""Unit-sphere geometry: tabular export, level-curve crossings and an SVG plot."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import polar
from .io import format_float
from .linalg import MatrixSet
from .polar import LookupMode, PolarNorm


@dataclass(frozen=True, eq=False)
class SphereTable:
    """One row per grid node.

    ``levels[i]`` is the radius of the curve ``||A_i x|| = rho`` at each
    angle, i.e. ``rho / (H_i(phi) R(Phi_i(phi)))``; it is ``inf`` where
    ``A_i`` kills the direction.
    """

    phi: np.ndarray
    R: np.ndarray
    levels: np.ndarray
    rho: float

    @property
    def inv_R(self) -> np.ndarray:
        return 1.0 / self.R


def sphere_table(norm: PolarNorm, matrix_set: MatrixSet, rho: float, lookup: LookupMode = "interp") -> SphereTable:
    tables = polar.build_transform_tables(matrix_set, norm.node_count)
    if lookup == "nearest":
        images = norm.values[tables.node_map]
    else:
        images = polar.lookup(norm.values, tables.position, lookup)
    denom = tables.H * images
    with np.errstate(divide="ignore"):
        levels = np.where(tables.H < polar.EPS_ZERO, np.inf, rho / denom)
    # nodes 0 and N are the same direction; sin(-pi) != sin(pi) in floating point
    levels[:, -1] = levels[:, 0]
    return SphereTable(norm.phi, norm.values.copy(), levels, float(rho))


def sphere_csv(table: SphereTable) -> str:
    r = table.levels.shape[0]
    header = ["phi", "R", "invR"] + [f"level_{i + 1}" for i in range(r)]
    lines = [",".join(header)]
    for k in range(table.phi.size):
        row = [table.phi[k], table.R[k], 1.0 / table.R[k], *table.levels[:, k]]
        lines.append(",".join(format_float(float(v)).replace("Infinity", "inf") for v in row))
    return "\n".join(lines) + "\n"


def sign_changes(diff: np.ndarray, rel_tol: float = 1e-12) -> int:
    """Cyclic sign changes of ``diff`` over ``N`` nodes (the endpoint dropped).

    Values within ``rel_tol`` of zero carry no sign, so a curve pair that
    touches exactly at a node counts as one crossing, not two.
    """
    d = np.asarray(diff, dtype=float)[:-1]
    finite = np.isfinite(d)
    scale = np.max(np.abs(d[finite])) if finite.any() else 1.0
    signs = np.sign(d[~finite | (np.abs(d) > rel_tol * scale)])
    if signs.size < 2:
        return 0
    return int(np.sum(signs != np.roll(signs, 1)))


def level_crossings(table: SphereTable) -> dict[str, int]:
    """Crossing counts for every pair of level curves, keyed ``"i-j"`` (1-based)."""
    out = {}
    for i, j in combinations(range(table.levels.shape[0]), 2):
        with np.errstate(invalid="ignore"):
            d = table.levels[i] - table.levels[j]
        d = np.where(np.isnan(d), 0.0, d)
        out[f"{i + 1}-{j + 1}"] = sign_changes(d)
    return out


_DASHES = ["8,5", "10,4,2,4", None, "2,3", "12,3,3,3,3,3"]


def _polyline(radius: np.ndarray, phi: np.ndarray, to_px) -> list[str]:
    """Split a polar curve into SVG point strings, breaking at infinite radii."""
    runs, cur = [], []
    for r, p in zip(radius, phi):
        if not math.isfinite(r):
            if len(cur) > 1:
                runs.append(cur)
            cur = []
            continue
        x, y = to_px(r * math.cos(p), r * math.sin(p))
        cur.append(f"{x:.3f},{y:.3f}")
    if len(cur) > 1:
        runs.append(cur)
    return [" ".join(c) for c in runs]


def sphere_svg(table: SphereTable, size: int = 600, title: str = "") -> str:
    """Unit sphere ``r = 1/R`` (thick) and the level curves ``||A_i x|| = rho``.

    The view is square with equal axes, half-width ``ceil`` of the largest
    finite radius, and dotted coordinate axes.
    """
    finite = table.levels[np.isfinite(table.levels)]
    extent = max(float(np.max(table.inv_R)), float(np.max(finite)) if finite.size else 0.0)
    half = max(1.0, math.ceil(extent))
    margin = 20
    scale = (size - 2 * margin) / (2 * half)

    def to_px(x, y):
        return margin + (x + half) * scale, margin + (half - y) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    x0, y0 = to_px(-half, 0)
    x1, y1 = to_px(half, 0)
    out.append(f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" stroke="black" stroke-dasharray="1,3"/>')
    x0, y0 = to_px(0, -half)
    x1, y1 = to_px(0, half)
    out.append(f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" stroke="black" stroke-dasharray="1,3"/>')

    legend = []
    for i in range(table.levels.shape[0]):
        dash = _DASHES[i % len(_DASHES)]
        style = f' stroke-dasharray="{dash}"' if dash else ""
        for pts in _polyline(table.levels[i], table.phi, to_px):
            out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1"{style}/>')
        legend.append((f"||A{i + 1}x||* = rho", style, 1))
    for pts in _polyline(table.inv_R, table.phi, to_px):
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="2.5"/>')
    legend.append(("||x||* = 1", "", 2.5))

    lx, ly = size - margin - 150, margin + 10
    out.append(f'<rect x="{lx - 8}" y="{ly - 12}" width="155" height="{18 * len(legend) + 8}" fill="white" stroke="black" stroke-width="0.5"/>')
    for j, (text, style, width) in enumerate(legend):
        y = ly + 18 * j
        out.append(f'<line x1="{lx}" y1="{y}" x2="{lx + 30}" y2="{y}" stroke="black" stroke-width="{width}"{style}/>')
        out.append(f'<text x="{lx + 38}" y="{y + 4}" font-family="serif" font-size="12">{_escape(text)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
