"""Closed planar curves and first-quadrant eight profiles.

Every curve is parameterized by ``u`` with period 1. The families provided
are ellipses, the lemniscate of Bernoulli, eight-shaped curves generated
from a first-quadrant profile ``y = f(x)``, and closed curves interpolated
from samples.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicSpline

from .errors import (
    ConditionViolated,
    EvaluationOutsideDomain,
    NonDifferentiable,
    QuadratureFailure,
)
from .geometry import cross, norm

TWO_PI = 2.0 * np.pi
CURVE_SCHEMA = "curvechoreo-curve"
CURVE_SCHEMA_VERSION = 1

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


class Symmetry(enum.Flag):
    NONE = 0
    POINT = enum.auto()
    AXIS = enum.auto()


# ---------------------------------------------------------------------------
# eight profiles


@dataclass(frozen=True)
class EightProfile:
    """First-quadrant graph ``y = f(x)`` on ``[0, 1]`` with three derivatives.

    The callables must accept numpy arrays. Evaluation outside the unit
    interval raises :class:`EvaluationOutsideDomain`.
    """

    f: Callable
    f1: Callable
    f2: Callable
    f3: Callable
    name: str = "profile"
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, x, order: int = 0):
        x = np.asarray(x, dtype=float)
        if np.any(x < -1e-14) or np.any(x > 1.0 + 1e-14):
            raise EvaluationOutsideDomain(f"profile '{self.name}' evaluated outside [0, 1]")
        x = np.clip(x, 0.0, 1.0)
        fn = (self.f, self.f1, self.f2, self.f3)[order]
        with np.errstate(divide="ignore", invalid="ignore"):
            return fn(x)

    def to_dict(self) -> dict:
        return {"form": self.name, **self.params}


def _lemniscate_parts(x):
    # f = x * sqrt(Q), Q = (3 - s) / (1 + s), s = sqrt(1 + 8 x^2); Q is written
    # without the cancellation in 3 - s near the tip
    s = np.sqrt(1.0 + 8.0 * x * x)
    s1 = 8.0 * x / s
    s2 = 8.0 / s**3
    s3 = -192.0 * x / s**5
    p = 1.0 + s
    q = 8.0 * (1.0 - x * x) / ((3.0 + s) * p)
    q1 = -4.0 * s1 / p**2
    q2 = -4.0 * s2 / p**2 + 8.0 * s1**2 / p**3
    q3 = -4.0 * s3 / p**2 + 24.0 * s1 * s2 / p**3 - 24.0 * s1**3 / p**4
    r = np.sqrt(np.maximum(q, 0.0))
    return r, q1, q2, q3


def _lem_f(x):
    r, *_ = _lemniscate_parts(x)
    return x * r


def _lem_f1(x):
    r, q1, *_ = _lemniscate_parts(x)
    return r + x * q1 / (2 * r)


def _lem_f2(x):
    r, q1, q2, _ = _lemniscate_parts(x)
    r1 = q1 / (2 * r)
    r2 = q2 / (2 * r) - q1**2 / (4 * r**3)
    return 2 * r1 + x * r2


def _lem_f3(x):
    r, q1, q2, q3 = _lemniscate_parts(x)
    r2 = q2 / (2 * r) - q1**2 / (4 * r**3)
    r3 = q3 / (2 * r) - 3 * q1 * q2 / (4 * r**3) + 3 * q1**3 / (8 * r**5)
    return 3 * r2 + x * r3


def lemniscate_profile() -> EightProfile:
    """Upper-right branch of ``(x^2 + y^2)^2 = x^2 - y^2``."""
    return EightProfile(_lem_f, _lem_f1, _lem_f2, _lem_f3, name="lemniscate")


def polynomial_profile(coefficients, sqrt_tip: bool = False, tip: str = "1-x") -> EightProfile:
    """Profile ``f(x) = P(x)``, or ``P(x) sqrt(1 - x)`` / ``P(x) sqrt(1 - x^2)`` with ``sqrt_tip``.

    ``coefficients`` are in increasing powers of ``x``. The square-root
    factor gives the vertical tangent at ``x = 1`` that eight-shaped curves
    need. With ``tip="1-x^2"`` and an odd ``P`` the profile is odd, so the
    curve is analytic through O; otherwise the curvature jumps there.
    """
    P = np.polynomial.Polynomial(np.asarray(coefficients, dtype=float))
    Ps = [P.deriv(k) for k in range(4)]
    params = {"coefficients": [float(c) for c in P.coef], "sqrt_tip": bool(sqrt_tip)}

    if not sqrt_tip:
        fs = [lambda x, p=p: p(x) for p in Ps]
        return EightProfile(*fs, name="polynomial", params=params)
    if tip not in ("1-x", "1-x^2"):
        raise ValueError(f"unknown tip form {tip!r}")
    params["tip"] = tip

    # derivatives of the square-root factor
    def g(x, k):
        if tip == "1-x":
            e = 1.0 - x
            return (np.sqrt(e), -0.5 / np.sqrt(e), -0.25 / e**1.5, -0.375 / e**2.5)[k]
        r = np.sqrt((1.0 - x) * (1.0 + x))
        return (r, -x / r, -1.0 / r**3, -3.0 * x / r**5)[k]

    binom = ((1,), (1, 1), (1, 2, 1), (1, 3, 3, 1))

    def make(order):
        def fn(x):
            return sum(b * Ps[order - j](x) * g(x, j) for j, b in enumerate(binom[order]))
        return fn

    return EightProfile(*(make(k) for k in range(4)), name="polynomial", params=params)


# ---------------------------------------------------------------------------
# condition checks


@dataclass
class ConditionResult:
    passed: bool
    witness: float | None = None
    detail: str = ""


@dataclass
class ConditionReport:
    applicable: bool
    results: dict = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.applicable and all(r.passed for r in self.results.values())

    @property
    def failures(self) -> dict:
        return {k: r for k, r in self.results.items() if not r.passed}


def _first_violation(x, values, bad):
    idx = np.flatnonzero(bad(values))
    return float(x[idx[0]]) if idx.size else None


def _refined_extremum(profile, order, x, values, sign, touch_tol):
    """Refine interior local maxima of ``sign * f^(order)`` on the grid.

    Returns the abscissa of a refined maximum reaching ``-touch_tol`` or above,
    which catches double roots that a grid never straddles.
    """
    v = sign * values
    interior = np.flatnonzero((v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:])) + 1
    for i in interior:
        res = optimize.minimize_scalar(
            lambda t: -sign * float(profile(t, order)),
            bounds=(x[i - 1], x[i + 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if -res.fun >= -touch_tol:
            return float(res.x)
    return None


def check_conditions(target, n: int = 1000, touch_tol: float = 1e-9) -> ConditionReport:
    """Evaluate the eight-curve conditions (I)-(VI) on a sampling grid.

    ``target`` is an :class:`EightProfile` or a curve carrying one; any
    other curve yields an inapplicable report.
    """
    profile = target if isinstance(target, EightProfile) else getattr(target, "profile", None)
    if profile is None:
        return ConditionReport(False, note=f"{getattr(target, 'name', target)!r} is not an eight-shaped curve")
    if n < 100:
        raise ValueError("condition checks need at least 100 interior points")

    x = np.linspace(0.0, 1.0, n + 2)[1:-1]
    f, f1, f2, f3 = (profile(x, k) for k in range(4))
    out = {}

    out["I"] = ConditionResult(True, detail="reflection symmetry holds by construction")

    ends = (float(profile(0.0)), float(profile(1.0)))
    ok = all(abs(e) < 1e-12 for e in ends)
    out["II"] = ConditionResult(ok, None if ok else (0.0 if abs(ends[0]) >= 1e-12 else 1.0),
                                f"f(0)={ends[0]:.3e}, f(1)={ends[1]:.3e}")

    w = _first_violation(x, f, lambda v: ~(v > 0))
    if w is None:
        w = _refined_extremum(profile, 0, x, f, -1.0, -0.0)
    out["III"] = ConditionResult(w is None, w, "f > 0 on (0, 1)")

    slope0 = float(profile(0.0, 1))
    tips = [float(profile(1.0 - e, 1)) for e in (1e-2, 1e-4, 1e-6)]
    diverging = tips[0] > tips[1] > tips[2] and tips[2] < 0 and tips[2] / tips[0] > 10.0
    ok = math.isfinite(slope0) and slope0 > 0 and diverging
    out["IV"] = ConditionResult(ok, None if ok else (0.0 if not (math.isfinite(slope0) and slope0 > 0) else 1.0),
                                f"f'(0)={slope0:.6g}, f'(1-eps)={tips}")

    for name, order, vals in (("V", 2, f2), ("VI", 3, f3)):
        w = _first_violation(x, vals, lambda v: ~(v < 0))
        if w is None:
            w = _refined_extremum(profile, order, x, vals, 1.0, touch_tol)
        out[name] = ConditionResult(w is None, w, f"f^({order}) < 0 on (0, 1)")

    return ConditionReport(True, out)


def critical_a0(profile: EightProfile, n: int = 200) -> float:
    """Abscissa ``a0`` in (0, 1) where ``f'(a0) = -f'(0)``."""
    x = np.linspace(0.0, 1.0, n + 2)[1:-1]
    slopes = profile(x, 1)
    if not np.all(np.diff(slopes) < 0):
        i = int(np.argmax(np.diff(slopes) >= 0))
        raise ConditionViolated(f"f' is not strictly decreasing near x={x[i]:.6g}")
    target = float(profile(0.0, 1))

    def h(a):
        return float(profile(a, 1)) + target

    hv = slopes + target
    change = np.flatnonzero(np.sign(hv[:-1]) != np.sign(hv[1:]))
    if change.size == 0:
        last = float(profile(1.0, 1))
        if hv[-1] > 0 and last + target < 0:
            lo, hi = x[-1], 1.0
        else:
            raise ConditionViolated("f'(a) + f'(0) has no sign change on (0, 1)")
    else:
        lo, hi = x[change[0]], x[change[0] + 1]
    return optimize.brentq(h, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


# ---------------------------------------------------------------------------
# curves


class Curve:
    """Closed curve ``q(u)`` with ``q(u + 1) = q(u)``.

    Subclasses supply ``_pos``, ``_d1`` and ``_d2`` for ``u`` in ``[0, 1)``.
    """

    name = "curve"
    symmetry = Symmetry.NONE
    is_eight = False
    table_nodes = 1024

    # -- evaluation
    def position(self, u):
        u = np.asarray(u, dtype=float)
        return self._pos(np.mod(u, 1.0))

    def derivative(self, u, order: int = 1):
        if order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        u = np.mod(np.asarray(u, dtype=float), 1.0)
        return self._d1(u) if order == 1 else self._d2(u)

    def speed(self, u):
        return norm(self.derivative(u, 1))

    def tangent(self, u):
        d = self.derivative(u, 1)
        return d / norm(d)[..., None]

    def samples(self, n: int) -> np.ndarray:
        return self.position(np.arange(n) / n)

    # -- arc length
    def arc_length(self, u0: float, u1: float, tol: float = 1e-10) -> float:
        """Length of the arc between parameters ``u0 <= u1`` (adaptive quadrature)."""
        if u1 < u0:
            raise ValueError("arc_length requires u0 <= u1")
        if u1 == u0:
            return 0.0
        n_pieces = max(1, int(math.ceil((u1 - u0) * 8)))
        edges = np.linspace(u0, u1, n_pieces + 1)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            val, err, info = self._quad(a, b, tol / n_pieces)
            total += val
        return total

    def _quad(self, a, b, tol):
        val, err, *rest = integrate.quad(
            lambda s: float(self.speed(s)), a, b, epsabs=tol, epsrel=0.0, limit=200, full_output=1
        )
        if len(rest) == 3 or err > tol:
            raise QuadratureFailure(f"arc length on [{a}, {b}] did not reach tolerance {tol:g} (err={err:.2e})")
        return val, err, None

    def _gauss(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        nodes = mid[..., None] + half[..., None] * _GL_X
        return half * (self.speed(nodes) @ _GL_W)

    @cached_property
    def _arc_table(self):
        n = self.table_nodes
        nodes = np.arange(n + 1) / n
        pieces = self._gauss(nodes[:-1], nodes[1:])
        return nodes, np.concatenate([[0.0], np.cumsum(pieces)])

    @cached_property
    def length(self) -> float:
        return float(self._arc_table[1][-1])

    def sigma_of_u(self, u):
        """Arc length from ``u = 0``; parameters outside [0, 1) count whole loops."""
        u = np.asarray(u, dtype=float)
        nodes, cum = self._arc_table
        n = nodes.size - 1
        loops = np.floor(u)
        frac = u - loops
        j = np.minimum((frac * n).astype(int), n - 1)
        return loops * cum[-1] + cum[j] + self._gauss(nodes[j], frac)

    def u_of_sigma(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        nodes, cum = self._arc_table
        L = cum[-1]
        loops = np.floor(sigma / L)
        u = loops + np.interp(sigma - loops * L, cum, nodes)
        for _ in range(8):
            step = (self.sigma_of_u(u) - sigma) / self.speed(u)
            u = u - step
            if np.all(np.abs(step) < 1e-16):
                break
        return u

    @cached_property
    def signed_area(self) -> float:
        """Signed enclosed area; zero for eight-shaped curves."""
        nodes = np.arange(self.table_nodes + 1) / self.table_nodes
        a, b = nodes[:-1], nodes[1:]
        half = 0.5 * (b - a)
        pts = 0.5 * (a + b)[:, None] + half[:, None] * _GL_X
        integrand = cross(self.position(pts), self.derivative(pts, 1))
        return float(0.5 * np.sum(half * (integrand @ _GL_W)))

    @property
    def orientation(self) -> int:
        return 1 if self.signed_area >= 0 else -1

    # -- inverse evaluation
    def locate(self, points, guess=None, max_iter: int = 40):
        """Parameter of the curve point nearest to ``points``.

        With ``guess`` the Newton iteration starts there and the returned
        parameter is not reduced modulo 1, which keeps branch continuity at
        self-intersections.
        """
        p = np.asarray(points, dtype=float)
        single = p.ndim == 1
        p = np.atleast_2d(p)
        if guess is None:
            # polish a few nearest grid points: near a self-intersection the
            # closest sample may sit on the wrong branch
            grid = np.arange(4096) / 4096
            dense = self.position(grid)
            d2 = np.sum((p[:, None, :] - dense[None, :, :]) ** 2, axis=-1)
            k = 4
            cand = grid[np.argpartition(d2, k, axis=1)[:, :k]]
            u = self._newton_project(np.repeat(p, k, axis=0), cand.reshape(-1), max_iter)
            dist = np.sum((self.position(u) - np.repeat(p, k, axis=0)) ** 2, -1).reshape(-1, k)
            u = np.mod(u.reshape(-1, k)[np.arange(p.shape[0]), np.argmin(dist, axis=1)], 1.0)
        else:
            u = self._newton_project(p, np.atleast_1d(np.asarray(guess, dtype=float)).copy(), max_iter)
        return float(u[0]) if single else u

    def _newton_project(self, p, u, max_iter):
        for _ in range(max_iter):
            d = self.position(u) - p
            t1 = self.derivative(u, 1)
            t2 = self.derivative(u, 2)
            phi = np.sum(d * t1, -1)
            dphi = np.sum(t1 * t1, -1) + np.sum(d * t2, -1)
            step = np.clip(phi / dphi, -0.01, 0.01)
            u = u - step
            if np.all(np.abs(step) < 1e-15):
                break
        return u

    # -- inside / outside
    def inside_indicator(self, points, exact: bool = False):
        """Signed radial offset ``|p| - rho(angle(p))`` for curves star-shaped about O.

        Negative inside, positive outside. ``exact=False`` interpolates the
        radius from a dense polar table, which is adequate for sign scans.
        """
        p = np.asarray(points, dtype=float)
        theta = np.arctan2(p[..., 1], p[..., 0])
        if not exact:
            ang, rad, _ = self._polar
            return norm(p) - np.interp(np.mod(theta, TWO_PI), ang, rad, period=TWO_PI)
        flat_t = np.atleast_1d(theta).reshape(-1)
        rho = np.array([norm(self.position(self._angle_parameter(t))) for t in flat_t])
        return norm(p) - rho.reshape(np.shape(theta))

    @cached_property
    def _polar(self):
        n = 4096
        u = np.arange(n) / n
        pts = self.position(u)
        th = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
        steps = np.diff(np.concatenate([th, [th[0] + self.orientation * TWO_PI]]))
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError(f"curve '{self.name}' is not star-shaped about the origin")
        ang = np.mod(th, TWO_PI)
        order = np.argsort(ang)
        return ang[order], norm(pts)[order], u[order]

    def _angle_parameter(self, theta):
        ang, _, us = self._polar
        t = float(np.mod(theta, TWO_PI))
        j = int(np.searchsorted(ang, t)) % ang.size
        u_hi = us[j]
        u_lo = us[j - 1]
        if self.orientation < 0:
            u_lo, u_hi = u_hi, u_lo
        if u_hi < u_lo:
            u_hi += 1.0

        def h(u):
            q = self.position(u)
            return math.remainder(math.atan2(q[1], q[0]) - t, TWO_PI)

        lo, hi = u_lo - 1e-9, u_hi + 1e-9
        return optimize.brentq(h, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)

    def to_dict(self) -> dict:
        raise NotImplementedError


class Ellipse(Curve):
    """``(a cos 2 pi u, b sin 2 pi u)``."""

    symmetry = Symmetry.POINT | Symmetry.AXIS

    def __init__(self, a: float, b: float):
        if not (a > 0 and b > 0):
            raise ValueError("ellipse semi-axes must be positive")
        self.a = float(a)
        self.b = float(b)
        self.name = "circle" if a == b else "ellipse"

    def __repr__(self):
        return f"Ellipse(a={self.a}, b={self.b})"

    def _pos(self, u):
        t = TWO_PI * u
        return np.stack([self.a * np.cos(t), self.b * np.sin(t)], -1)

    def _d1(self, u):
        t = TWO_PI * u
        return TWO_PI * np.stack([-self.a * np.sin(t), self.b * np.cos(t)], -1)

    def _d2(self, u):
        return -(TWO_PI**2) * self._pos(u)

    def implicit(self, points):
        p = np.asarray(points, dtype=float)
        return (p[..., 0] / self.a) ** 2 + (p[..., 1] / self.b) ** 2 - 1.0

    def inside_indicator(self, points, exact: bool = False):
        return self.implicit(points)

    def locate(self, points, guess=None, max_iter: int = 40):
        p = np.asarray(points, dtype=float)
        u = np.mod(np.arctan2(p[..., 1] / self.b, p[..., 0] / self.a) / TWO_PI, 1.0)
        if guess is not None:
            u = u + np.round(np.asarray(guess) - u)
        return float(u) if np.ndim(u) == 0 else u

    def to_dict(self):
        return {"kind": "ellipse", "a": self.a, "b": self.b}


class Lemniscate(Curve):
    """Lemniscate of Bernoulli ``(x^2 + y^2)^2 = x^2 - y^2``.

    ``q(u) = (cos t, sin t cos t) / (1 + sin^2 t)`` with ``t = 2 pi u``; the
    curve starts at (1, 0), runs through the upper-right branch to O and then
    into the lower-left branch.
    """

    name = "lemniscate"
    symmetry = Symmetry.POINT | Symmetry.AXIS
    is_eight = True

    def __repr__(self):
        return "Lemniscate()"

    @cached_property
    def profile(self) -> EightProfile:
        return lemniscate_profile()

    def _pos(self, u):
        t = TWO_PI * u
        s, c = np.sin(t), np.cos(t)
        d = 1.0 + s * s
        return np.stack([c / d, s * c / d], -1)

    def _d1(self, u):
        t = TWO_PI * u
        s = np.sin(t)
        d = 1.0 + s * s
        return TWO_PI * np.stack([-s * (3.0 - s * s), 1.0 - 3.0 * s * s], -1) / (d * d)[..., None]

    def _d2(self, u):
        t = TWO_PI * u
        s, c = np.sin(t), np.cos(t)
        s2 = s * s
        d3 = (1.0 + s2) ** 3
        return TWO_PI**2 * np.stack([c * (-3.0 + 12.0 * s2 - s2 * s2), s * c * (6.0 * s2 - 10.0)], -1) / d3[..., None]

    def implicit(self, points):
        p = np.asarray(points, dtype=float)
        x2, y2 = p[..., 0] ** 2, p[..., 1] ** 2
        return (x2 + y2) ** 2 - (x2 - y2)

    def to_dict(self):
        return {"kind": "lemniscate"}


class ProfileEight(Curve):
    """Eight-shaped curve assembled from a first-quadrant profile.

    The right lobe uses ``w`` in [-1, 1] with ``x = cos(pi w / 2)`` and
    ``y = sign(w) f(x)``, which stays regular through the vertical tangent at
    (1, 0). The left lobe is the point reflection, traversed so that the
    curve passes straight through O. Over the whole loop ``x`` is a single
    cosine of ``u``, so for odd profiles the parameterization is smooth at O.
    """

    name = "eight_profile"
    symmetry = Symmetry.POINT | Symmetry.AXIS
    is_eight = True
    _TIP = 1e-3

    def __init__(self, profile: EightProfile):
        self.profile = profile

    def __repr__(self):
        return f"ProfileEight({self.profile.name})"

    @staticmethod
    def _chart(w):
        c = 0.5 * np.pi
        return np.cos(c * w), -c * np.sin(c * w), -c * c * np.cos(c * w)

    def _right(self, w):
        x = np.clip(self._chart(w)[0], 0.0, 1.0)
        return np.stack([x, np.sign(w) * self.profile(x)], -1)

    def _raw_d1y(self, w):
        x, dx, _ = self._chart(w)
        return np.sign(w) * self.profile(np.clip(x, 0.0, 1.0), 1) * dx

    def _raw_d2y(self, w):
        x, dx, ddx = self._chart(w)
        x = np.clip(x, 0.0, 1.0)
        return np.sign(w) * (self.profile(x, 2) * dx * dx + self.profile(x, 1) * ddx)

    def _right_d1(self, w):
        w = np.asarray(w, dtype=float)
        h = self._TIP
        near = np.abs(w) < h
        dy = self._raw_d1y(np.where(near, h, w))
        if np.any(near):
            # y' is even in w; the profile slope loses precision at the tip
            a, b = self._raw_d1y(h), self._raw_d1y(2 * h)
            c2 = (b - a) / (3 * h * h)
            dy = np.where(near, a + c2 * (w * w - h * h), dy)
        return np.stack([self._chart(w)[1], dy], -1)

    def _right_d2(self, w):
        w = np.asarray(w, dtype=float)
        h = self._TIP
        near = np.abs(w) < h
        ddy = self._raw_d2y(np.where(near, h, w))
        if np.any(near):
            # y'' is odd in w: fit c1 w + c3 w^3 through w = h, 2h
            a, b = self._raw_d2y(h) / h, self._raw_d2y(2 * h) / (2 * h)
            c3 = (b - a) / (3 * h * h)
            c1 = a - c3 * h * h
            ddy = np.where(near, w * (c1 + c3 * w * w), ddy)
        return np.stack([self._chart(w)[2], ddy], -1)

    def _split(self, u):
        right = u < 0.5
        w = np.where(right, -1.0 + 4.0 * u, -1.0 + 4.0 * (u - 0.5))
        return right, w

    def _pos(self, u):
        right, w = self._split(u)
        return np.where(right[..., None], self._right(w), -self._right(-w))

    def _d1(self, u):
        right, w = self._split(u)
        return 4.0 * np.where(right[..., None], self._right_d1(w), self._right_d1(-w))

    def _d2(self, u):
        right, w = self._split(u)
        return 16.0 * np.where(right[..., None], self._right_d2(w), -self._right_d2(-w))

    def to_dict(self):
        return {"kind": "eight_profile", "profile": self.profile.to_dict()}


class SampledCurve(Curve):
    """Closed curve through sample points, interpolated by a periodic cubic spline.

    Samples are placed at ``u_j = j / m``. Sharp turns between consecutive
    chords are recorded as corners; derivatives requested there raise
    :class:`NonDifferentiable`.
    """

    name = "general"

    def __init__(self, points, symmetry: Symmetry = Symmetry.NONE, corner_angle: float = 60.0):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
            raise ValueError("need at least four (x, y) samples")
        if not np.all(np.isfinite(pts)):
            raise ValueError("samples must be finite")
        if np.allclose(pts[0], pts[-1]):
            pts = pts[:-1]
        self.points = pts
        self.symmetry = symmetry
        m = pts.shape[0]
        self.table_nodes = m * int(math.ceil(1024 / m))
        closed = np.vstack([pts, pts[:1]])
        self._spline = CubicSpline(np.arange(m + 1) / m, closed, bc_type="periodic")
        self._spline_d1 = self._spline.derivative(1)
        self._spline_d2 = self._spline.derivative(2)
        chords = np.diff(closed, axis=0)
        prev = np.roll(chords, 1, axis=0)
        turn = np.degrees(np.abs(np.arctan2(cross(prev, chords), np.sum(prev * chords, -1))))
        self.corners = np.flatnonzero(turn > corner_angle) / m

    def __repr__(self):
        return f"SampledCurve(m={self.points.shape[0]}, symmetry={self.symmetry})"

    def _pos(self, u):
        return self._spline(u)

    def _check_corner(self, u):
        if self.corners.size:
            gap = np.abs(np.asarray(u)[..., None] - self.corners)
            gap = np.minimum(gap, 1.0 - gap)
            if np.any(gap < 1e-9):
                raise NonDifferentiable("derivative requested at a corner sample")

    def _d1(self, u):
        self._check_corner(u)
        return self._spline_d1(u)

    def _d2(self, u):
        self._check_corner(u)
        return self._spline_d2(u)

    def to_dict(self):
        sym = "point" if Symmetry.POINT in self.symmetry else ("axis" if Symmetry.AXIS in self.symmetry else "none")
        return {"kind": "general", "symmetry": sym, "points": self.points.tolist()}


def circle(radius: float = 1.0) -> Ellipse:
    return Ellipse(radius, radius)


def is_point_symmetric(curve: Curve) -> bool:
    return Symmetry.POINT in curve.symmetry


# ---------------------------------------------------------------------------
# curve definition files


def curve_from_dict(data: dict) -> Curve:
    """Build a curve from its JSON definition."""
    version = data.get("version", CURVE_SCHEMA_VERSION)
    if version != CURVE_SCHEMA_VERSION:
        raise ValueError(f"unsupported curve schema version {version}")
    kind = data.get("kind")
    if kind in ("ellipse", "circle"):
        if kind == "circle":
            r = float(data.get("radius", 1.0))
            return Ellipse(r, r)
        return Ellipse(float(data["a"]), float(data["b"]))
    if kind == "lemniscate":
        return Lemniscate()
    if kind == "eight_profile":
        return ProfileEight(profile_from_dict(data["profile"]))
    if kind == "general":
        sym = {"point": Symmetry.POINT, "axis": Symmetry.AXIS, "none": Symmetry.NONE}[data.get("symmetry", "none")]
        return SampledCurve(data["points"], symmetry=sym)
    raise ValueError(f"unknown curve kind {kind!r}")


def profile_from_dict(data: dict) -> EightProfile:
    form = data.get("form")
    if form == "lemniscate":
        return lemniscate_profile()
    if form == "polynomial":
        return polynomial_profile(data["coefficients"], sqrt_tip=data.get("sqrt_tip", False),
                                  tip=data.get("tip", "1-x"))
    raise ValueError(f"unknown profile form {form!r}")


def curve_to_dict(curve: Curve) -> dict:
    return {"schema": CURVE_SCHEMA, "version": CURVE_SCHEMA_VERSION, **curve.to_dict()}


def load_curve(path) -> Curve:
    return curve_from_dict(json.loads(Path(path).read_text()))


def save_curve(curve: Curve, path) -> None:
    Path(path).write_text(json.dumps(curve_to_dict(curve), indent=2) + "\n")
