"""Pair problem: given q3, find q1, q2 on the curve(s) with a fixed centre of mass.

With equal masses the pair is ``{q, q*}`` where ``q`` is a crossing of the
curve with its translate ``gamma - q3`` and ``q* = -q - q3``. Eight-shaped
curves admit the trivial pair ``{O, -q3}`` as well, and a non-trivial one
located through the branch difference ``g(x, a)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.sparse.csgraph import connected_components
from scipy.sparse import coo_matrix
from scipy.spatial import cKDTree

from .curves import Curve, EightProfile, critical_a0, is_point_symmetric
from .errors import CrossingCountUnexpected, DomainViolation, RootNotBracketed
from .geometry import cross, norm, star_map, vec2

TRIVIAL_TOL = 1e-8
DEGENERACY_WINDOW = 1e-6
ON_CURVE_TOL = 1e-8


class PairKind(str, enum.Enum):
    TRIVIAL = "trivial"
    NON_TRIVIAL = "non_trivial"


@dataclass
class Pair:
    q1: np.ndarray
    q2: np.ndarray
    kind: PairKind = PairKind.NON_TRIVIAL
    collinear: bool = False

    def to_dict(self) -> dict:
        return {"q1": self.q1.tolist(), "q2": self.q2.tolist(), "kind": self.kind.value,
                "collinear": self.collinear}


@dataclass
class PairSolution:
    q3: np.ndarray
    pairs: list = field(default_factory=list)
    masses: tuple = (1.0, 1.0, 1.0)
    degenerate: bool = False
    off_curve: bool = False
    negative_masses: bool = False

    @property
    def non_trivial(self) -> list:
        return [p for p in self.pairs if p.kind is PairKind.NON_TRIVIAL]

    @property
    def trivial(self) -> list:
        return [p for p in self.pairs if p.kind is PairKind.TRIVIAL]

    def to_dict(self) -> dict:
        return {
            "q3": self.q3.tolist(),
            "masses": list(self.masses),
            "pairs": [p.to_dict() for p in self.pairs],
            "degenerate": self.degenerate,
            "off_curve": self.off_curve,
            "negative_masses": self.negative_masses,
        }


def _collinear(q1, q2, q3) -> bool:
    scale = max(1.0, float(np.max(np.abs([q1, q2, q3]))))
    return abs(float(cross(q1 - q3, q2 - q3))) < 1e-10 * scale**2


def _is_trivial(q1, q2, q3) -> bool:
    minus = -q3
    a = norm(q1) < TRIVIAL_TOL and norm(q2 - minus) < TRIVIAL_TOL
    b = norm(q2) < TRIVIAL_TOL and norm(q1 - minus) < TRIVIAL_TOL
    return bool(a or b)


def _make_pair(q1, q2, q3, kind=None) -> Pair:
    if kind is None:
        kind = PairKind.TRIVIAL if _is_trivial(q1, q2, q3) else PairKind.NON_TRIVIAL
    return Pair(np.asarray(q1, float), np.asarray(q2, float), kind, _collinear(q1, q2, q3))


# ---------------------------------------------------------------------------
# branch difference analysis for eight profiles


def g_function(profile: EightProfile, x, a: float):
    """``g(x, a) = f(-x) - f(x + a) + f(a)`` on ``0 < a <= 1``, ``-a <= x <= 0``."""
    x = np.asarray(x, dtype=float)
    if not (0.0 < a <= 1.0):
        raise DomainViolation(f"a={a} outside (0, 1]")
    if np.any(x < -a) or np.any(x > 0.0):
        raise DomainViolation(f"x outside [-a, 0] for a={a}")
    out = profile(-x) - profile(x + a) + profile(a)
    return float(out) if out.ndim == 0 else out


def x0_of_a(profile: EightProfile, a: float, a0: float | None = None, height: float | None = None) -> float | None:
    """Zero of ``g(., a)`` in ``(-a/2, 0)``, or None when ``a <= a0``.

    Inside the degeneracy window around ``a0`` the zero merges with the
    double root at 0 and None is returned as well. ``height`` replaces
    ``f(a)`` by the measured height of ``q3``, which matters near the
    vertical tangent where ``f(a)`` is ill-conditioned.
    """
    if not (0.0 < a <= 1.0):
        raise DomainViolation(f"a={a} outside (0, 1]")
    if a0 is None:
        a0 = critical_a0(profile)
    if a <= a0 + DEGENERACY_WINDOW:
        return None

    if height is None:
        def g(x):
            return g_function(profile, x, a)
    else:
        def g(x):
            return float(profile(-x) - profile(x + a)) + height

    lo = -0.5 * a
    if g(lo) < 0:
        raise RootNotBracketed(f"g(-a/2, a) = {g(lo):.3e} is negative for a={a}")
    delta = 0.5 * a
    for _ in range(60):
        delta *= 0.5
        if g(-delta) < 0:
            break
    else:
        raise RootNotBracketed(f"g(x, a) stays non-negative near x=0 for a={a}")
    return optimize.brentq(g, lo, -delta, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def _right_lobe_root(profile: EightProfile, a: float, height: float | None = None) -> float:
    """Abscissa ``x`` of the non-trivial ``q1 = (x, -f(x))`` for ``a < a0``.

    ``q1 + q3 = (x + a, f(a) - f(x))`` must lie on the right lobe.
    """
    fa = float(profile(a)) if height is None else height

    def k(x):
        return (float(profile(x + a)) ** 2 - (fa - float(profile(x))) ** 2) / x

    hi = 1.0 - a
    khi = k(hi)
    if khi > 0:
        if abs(fa - float(profile(hi))) < 1e-13:
            return hi
        raise RootNotBracketed(f"right-lobe crossing not bracketed for a={a}")
    delta = hi
    for _ in range(80):
        delta *= 0.5
        if k(delta) > 0:
            break
    else:
        raise RootNotBracketed(f"right-lobe crossing not bracketed near O for a={a}")
    if khi == 0.0:
        return hi
    return optimize.brentq(k, delta, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def solve_eight_pair(profile: EightProfile, a: float, a0: float | None = None,
                     height: float | None = None) -> PairSolution:
    """Both pairs for ``q3 = (a, f(a))``, ``0 < a <= 1``.

    ``height`` overrides ``f(a)`` as the y-coordinate of ``q3``.

    The trivial pair ``{O, -q3}`` is always present. The non-trivial pair
    sits on the right lobe for ``a < a0`` and straddles the left lobe for
    ``a > a0``. Within the degeneracy window the two coincide and are
    reported once.
    """
    if not (0.0 < a <= 1.0):
        raise DomainViolation(f"a={a} outside (0, 1]")
    if a0 is None:
        a0 = critical_a0(profile)
    q3 = np.array([a, float(profile(a)) if height is None else height])
    origin = np.zeros(2)
    trivial = _make_pair(origin, -q3, q3, PairKind.TRIVIAL)
    if abs(a - a0) < DEGENERACY_WINDOW:
        return PairSolution(q3, [trivial], degenerate=True)
    if a > a0:
        x0 = x0_of_a(profile, a, a0, height)
        q1 = np.array([x0, float(profile(-x0))])
    else:
        x = _right_lobe_root(profile, a, height)
        q1 = np.array([x, -float(profile(x))])
    q2 = star_map(q1, q3)
    return PairSolution(q3, [trivial, _make_pair(q1, q2, q3, PairKind.NON_TRIVIAL)])


def solve_eight_point(curve: Curve, q3, direction=None, a0: float | None = None) -> PairSolution:
    """Pairs for an arbitrary ``q3`` on an eight-shaped curve.

    ``q3`` is reflected into the closed first quadrant, solved there and
    mapped back. At ``q3 = O`` the non-trivial pair is the limit along the
    branch with tangent ``direction`` and is omitted if none is given.
    """
    profile = curve.profile
    q3 = vec2(q3)
    if a0 is None:
        a0 = critical_a0(profile)
    X, Y = q3
    sx = -1.0 if X < 0 else 1.0
    sy = -1.0 if Y < 0 else 1.0
    a = min(abs(X), 1.0)
    off = abs(abs(Y) - float(profile(a))) > ON_CURVE_TOL or abs(X) > 1.0 + ON_CURVE_TOL
    origin = np.zeros(2)
    if a < 1e-12:
        sol = PairSolution(q3, [_make_pair(origin, -q3, q3, PairKind.TRIVIAL)], degenerate=True, off_curve=off)
        if direction is not None:
            d = vec2(direction)
            fy = float(profile(a0))
            q1 = np.array([a0, -fy]) if d[0] * d[1] > 0 else np.array([a0, fy])
            sol.pairs.append(_make_pair(q1, -q1 - q3, q3, PairKind.NON_TRIVIAL))
        return sol
    base = solve_eight_pair(profile, a, a0, None if off else abs(Y))
    M = np.array([sx, sy])
    pairs = []
    for p in base.pairs:
        q1 = M * p.q1
        pairs.append(_make_pair(q1, star_map(q1, q3), q3, p.kind))
    return PairSolution(q3, pairs, degenerate=base.degenerate, off_curve=off)


# ---------------------------------------------------------------------------
# point-symmetric convex curves


def _sign_changes(values) -> np.ndarray:
    pos = values > 0
    return np.flatnonzero(pos != np.roll(pos, -1))


def solve_symmetric_pair(curve: Curve, q3, n_seeds: int = 512) -> PairSolution:
    """Unique pair for a point-symmetric convex curve.

    The translate ``gamma - q3`` is scanned at ``n_seeds`` parameters for
    sign changes of the curve's inside indicator. One crossing is polished
    by Brent's method and its star image is checked against the other.
    ``q1`` is labelled as the point a third of a loop ahead of ``q3`` in
    the direction of traversal.
    """
    if not is_point_symmetric(curve):
        raise DomainViolation(f"curve '{curve.name}' is not point-symmetric")
    q3 = vec2(q3)
    off = float(norm(curve.position(curve.locate(q3)) - q3)) > ON_CURVE_TOL
    v = np.arange(n_seeds) / n_seeds
    ind = curve.inside_indicator(curve.position(v) - q3)
    changes = _sign_changes(ind)
    if changes.size == 0 and off:
        return PairSolution(q3, [], off_curve=True)
    if changes.size != 2:
        raise CrossingCountUnexpected(f"found {changes.size} crossings of the curve with its translate")

    def h(s):
        return float(curve.inside_indicator(curve.position(s) - q3, exact=True))

    roots = []
    for j in changes:
        lo, hi = j / n_seeds, (j + 1) / n_seeds
        roots.append(optimize.brentq(h, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200))
    q = curve.position(roots[0]) - q3
    partner = curve.position(roots[1]) - q3
    q_star = -curve.position(roots[0])
    if norm(q_star - partner) > 1e-7 * max(1.0, float(norm(q3))):
        raise CrossingCountUnexpected("second crossing is not the star image of the first")
    if curve.orientation * cross(q3, q) > 0:
        q1, q2 = q, q_star
    else:
        q1, q2 = q_star, q
    return PairSolution(q3, [_make_pair(q1, q2, q3, PairKind.NON_TRIVIAL)], off_curve=off)


def solve_pair(curve: Curve, q3, **kwargs) -> PairSolution:
    """Equal-mass pair problem on a single curve."""
    if curve.is_eight:
        return solve_eight_point(curve, q3, **kwargs)
    return solve_symmetric_pair(curve, q3, **kwargs)


# ---------------------------------------------------------------------------
# general masses


def _same_curve(c1: Curve, c2: Curve) -> bool:
    if c1 is c2:
        return True
    try:
        return c1.to_dict() == c2.to_dict()
    except NotImplementedError:
        return False


def solve_general_pair(curve1: Curve, curve2: Curve, q3, masses=(1.0, 1.0, 1.0),
                       n: int = 4096, residual_tol: float = 1e-10) -> PairSolution:
    """All ``q1 in gamma1``, ``q2 in gamma2`` with ``m1 q1 + m2 q2 + m3 q3 = 0``.

    Candidates come from near-coincidences of ``-(m1 gamma1 + m3 q3) / m2``
    with a dense sampling of ``gamma2``; each is polished by Levenberg-Marquardt
    in the two curve parameters. Equal masses on a single point-symmetric
    convex curve reduce to :func:`solve_symmetric_pair`.
    """
    m1, m2, m3 = (float(m) for m in masses)
    if 0.0 in (m1, m2, m3):
        raise DomainViolation("masses must be non-zero")
    q3 = vec2(q3)
    negative = min(m1, m2, m3) < 0
    if m1 == m2 == m3 and _same_curve(curve1, curve2) and is_point_symmetric(curve1) and not curve1.is_eight:
        sol = solve_symmetric_pair(curve1, q3)
        sol.masses = (m1, m2, m3)
        return sol

    u = np.arange(n) / n
    p1 = curve1.position(u)
    cand = -(m1 * p1 + m3 * q3) / m2
    v_grid = np.arange(2 * n) / (2 * n)
    p2 = curve2.position(v_grid)
    dist, idx = cKDTree(p2).query(cand)
    step = max(float(np.max(norm(np.diff(cand, axis=0)))), float(np.max(norm(np.diff(p2, axis=0)))))
    local = (dist <= np.roll(dist, 1)) & (dist <= np.roll(dist, -1)) & (dist < 4.0 * step)

    def residual(z):
        return m1 * curve1.position(z[0]) + m2 * curve2.position(z[1]) + m3 * q3

    def jac(z):
        return np.column_stack([m1 * curve1.derivative(z[0]), m2 * curve2.derivative(z[1])])

    scale = max(1.0, abs(m1), abs(m2), abs(m3))
    found = []
    for i in np.flatnonzero(local):
        res = optimize.least_squares(residual, [u[i], v_grid[idx[i]]], jac=jac, method="lm",
                                     xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        if np.max(np.abs(residual(res.x))) >= residual_tol * scale:
            continue
        q1 = curve1.position(res.x[0])
        q2 = -(m1 * q1 + m3 * q3) / m2
        if any(norm(q1 - f[0]) < 1e-7 for f in found):
            continue
        found.append((q1, q2))
    pairs = [Pair(q1, q2, PairKind.NON_TRIVIAL, _collinear(q1, q2, q3)) for q1, q2 in found]
    off = float(norm(curve1.position(curve1.locate(q3)) - q3)) > ON_CURVE_TOL
    return PairSolution(q3, pairs, masses=(m1, m2, m3), off_curve=off, negative_masses=negative)


# ---------------------------------------------------------------------------
# brute-force crossing count


def count_crossings_oracle(curve_a, curve_b, tol: float) -> int:
    """Number of separate places where two dense point sets come within ``tol``.

    Near points of ``curve_a`` are grouped into clusters by proximity. A
    near-total overlap (identical curves) returns -1.
    """
    A = np.asarray(curve_a, dtype=float)
    B = np.asarray(curve_b, dtype=float)
    d, _ = cKDTree(B).query(A)
    near = d < tol
    if near.mean() > 0.5:
        return -1
    pts = A[near]
    if pts.shape[0] == 0:
        return 0
    spacing = float(np.median(cKDTree(A).query(A, k=2)[0][:, 1]))
    links = cKDTree(pts).query_pairs(max(3.0 * spacing, 2.0 * tol), output_type="ndarray")
    graph = coo_matrix((np.ones(len(links)), (links[:, 0], links[:, 1])), shape=(len(pts), len(pts)))
    count, _ = connected_components(graph, directed=False)
    return int(count)
