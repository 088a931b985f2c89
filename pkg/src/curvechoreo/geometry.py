"""Planar vector and line primitives.

Points and vectors are plain float arrays whose last axis has length 2, so
every function here broadcasts over stacks of points.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import ParallelLines

PARALLEL_SINE = 1e-12


def vec2(x, y=None) -> np.ndarray:
    """Build a finite planar vector.

    Accepts either two scalars or a single length-2 sequence.
    """
    v = np.asarray(x if y is None else (x, y), dtype=float)
    if v.shape != (2,):
        raise ValueError(f"expected a planar vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector component in {v}")
    return v


def cross(u, v):
    """Scalar wedge product ``u.x * v.y - u.y * v.x``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def star_map(q, q3):
    """Point reflection through ``-q3/2``: ``q -> -q - q3``."""
    return -np.asarray(q, dtype=float) - np.asarray(q3, dtype=float)


def norm(v):
    return np.hypot(np.asarray(v)[..., 0], np.asarray(v)[..., 1])


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / norm(v)[..., None]


@dataclass(frozen=True)
class Line:
    """Infinite line through ``point`` along ``direction``."""

    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", vec2(self.point))
        object.__setattr__(self, "direction", vec2(self.direction))
        if norm(self.direction) == 0.0:
            raise ValueError("line direction must be non-zero")

    def distance(self, p) -> float:
        d = self.direction
        return float(abs(cross(d, np.asarray(p, dtype=float) - self.point)) / norm(d))


def are_parallel(d1, d2, threshold: float = PARALLEL_SINE) -> bool:
    return abs(cross(d1, d2)) / (norm(d1) * norm(d2)) < threshold


def intersect(l1: Line, l2: Line) -> np.ndarray:
    """Intersection point of two non-parallel lines."""
    if are_parallel(l1.direction, l2.direction):
        raise ParallelLines("lines are parallel")
    denom = cross(l1.direction, l2.direction)
    s = cross(l2.point - l1.point, l2.direction) / denom
    return l1.point + s * l1.direction


def concurrency_defect(l1: Line, l2: Line, l3: Line) -> float:
    """Largest distance from a pairwise intersection to the remaining line.

    Taking the maximum over all orderings keeps the measure symmetric in its
    arguments.
    """
    lines = (l1, l2, l3)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        if are_parallel(lines[a].direction, lines[b].direction):
            raise ParallelLines(f"lines {a + 1} and {b + 1} are parallel")
    worst = 0.0
    for i, j, k in permutations(range(3)):
        if i < j:
            p = intersect(lines[i], lines[j])
            worst = max(worst, lines[k].distance(p))
    return worst


def three_lines_concurrent(l1: Line, l2: Line, l3: Line, tol: float) -> bool:
    """True when the three lines meet at a point, to within ``tol`` in length."""
    return concurrency_defect(l1, l2, l3) < tol
