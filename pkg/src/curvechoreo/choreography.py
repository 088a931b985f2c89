"""Sweeps of the pair solution around a curve and their time reparameterization.

A sweep records the non-trivial pair ``q1(sigma), q2(sigma)`` while ``q3``
travels once around the curve at unit speed in arc length ``sigma``. Time
enters only afterwards, through a conserved quantity: constant angular
momentum ``d sigma/dt = c / J(sigma)`` or constant energy
``d sigma/dt = sqrt(2 (E - V) / M)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._spectral import TrigInterpolant, spectral_derivative
from .curves import Curve, critical_a0
from .errors import BranchJump, TurningPoint, UniquenessViolated, VanishingJ
from .geometry import cross, norm
from .pairs import solve_pair
from .potentials import PairPotential

TANGENT_DEGENERACY = 1e-2
_NEWTON_TOL = 1e-14


@dataclass
class Sweep:
    """Pair solutions on a uniform arc-length grid of ``q3``.

    ``q`` and ``dq`` have shape ``(3, n, 2)`` with body index first;
    ``dq`` is the derivative with respect to ``sigma``. ``u`` holds the
    unwrapped curve parameters of the three bodies.
    """

    curve: Curve
    sigma: np.ndarray
    u: np.ndarray
    q: np.ndarray
    dq: np.ndarray
    J: np.ndarray
    rate: np.ndarray
    degenerate: np.ndarray
    length: float

    @property
    def n(self) -> int:
        return self.sigma.size

    @property
    def sigma_bodies(self) -> np.ndarray:
        """Arc-length positions ``sigma_1, sigma_2, sigma_3`` (unwrapped)."""
        return self.curve.sigma_of_u(self.u)

    @property
    def monotone(self) -> bool:
        return bool(np.all(self.rate > 0))

    def max_com_error(self) -> float:
        return float(np.max(np.abs(self.q.sum(axis=0))))

    def offsets(self):
        """Interpolants of ``sigma_i(sigma) - sigma`` for bodies 1 and 2."""
        s = self.sigma_bodies
        return [TrigInterpolant(s[i] - self.sigma, self.length) for i in (0, 1)]


def _pair_newton(curve: Curve, u1, u2, q3, max_iter=30):
    for _ in range(max_iter):
        F = curve.position(u1) + curve.position(u2) + q3
        if np.max(np.abs(F)) < _NEWTON_TOL:
            return u1, u2, True
        t1 = curve.derivative(u1)
        t2 = curve.derivative(u2)
        det = cross(t1, t2)
        if det == 0.0:
            return u1, u2, False
        du1 = cross(F, t2) / det
        du2 = cross(t1, F) / det
        u1, u2 = u1 - du1, u2 - du2
        if max(abs(du1), abs(du2)) < 1e-16:
            break
    # near a vertical tangent the profile's rounding can keep |F| just above the target
    F = curve.position(u1) + curve.position(u2) + q3
    return u1, u2, bool(np.max(np.abs(F)) < 1e-11)


def _pair_newton_many(curve: Curve, u1, u2, q3, max_iter=10):
    """Vectorized refinement of many pairs.

    Steps are damped Gauss-Newton with a tiny Levenberg term, so where the
    Jacobian is nearly singular (``q3`` close to O on an eight) the guess is
    kept along the null direction instead of being thrown along the family
    of symmetric solutions.
    """
    u1 = np.array(u1, dtype=float)
    u2 = np.array(u2, dtype=float)
    for _ in range(max_iter):
        F = curve.position(u1) + curve.position(u2) + q3
        if np.max(np.abs(F), initial=0.0) < _NEWTON_TOL:
            break
        t1 = curve.derivative(u1)
        t2 = curve.derivative(u2)
        a11 = np.sum(t1 * t1, -1)
        a22 = np.sum(t2 * t2, -1)
        a12 = np.sum(t1 * t2, -1)
        lam = 1e-12 * (a11 + a22)
        a11, a22 = a11 + lam, a22 + lam
        g1 = np.sum(t1 * F, -1)
        g2 = np.sum(t2 * F, -1)
        det = a11 * a22 - a12 * a12
        du1 = (a22 * g1 - a12 * g2) / det
        du2 = (a11 * g2 - a12 * g1) / det
        u1, u2 = u1 - du1, u2 - du2
        if max(np.max(np.abs(du1), initial=0.0), np.max(np.abs(du2), initial=0.0)) < 1e-16:
            break
    return u1, u2


def _origin_limit(curve: Curve, u1, u2, t3):
    """Non-trivial pair for ``q3 = O`` on a point-symmetric eight.

    Every ``{q, -q}`` solves the sum equation there; the pair reached by
    continuation is the one whose tangent is parallel to the tangent at O.
    """
    for _ in range(30):
        d1 = curve.derivative(u1)
        step = cross(d1, t3) / cross(curve.derivative(u1, 2), t3)
        u1 -= step
        if abs(step) < 1e-16:
            break
    u2 = curve.locate(-curve.position(u1), guess=u2)
    return float(u1), float(np.ravel(u2)[0])


def _skip_check(curve: Curve, q3, a0) -> bool:
    """Points where the pair solver cannot separate the non-trivial pair."""
    if not curve.is_eight:
        return False
    a = abs(q3[0])
    return a < 1e-3 or abs(a - a0) < 1e-3


def _initial_labels(curve: Curve, u3, pair):
    ua = curve.locate(pair.q1)
    ub = curve.locate(pair.q2)
    if (ua - u3) % 1.0 > (ub - u3) % 1.0:
        ua, ub = ub, ua
    return ua, ub


def geometric_sweep(curve: Curve, n: int = 512, verify: bool = True, max_jump: float = 0.05) -> Sweep:
    """Track the non-trivial pair while ``q3`` goes once around the curve.

    Parameters
    ----------
    curve : Curve
        Point-symmetric convex curve or eight-shaped curve.
    n : int
        Number of uniform arc-length samples of ``q3`` (at least 128).
    verify : bool
        Cross-check every continuation step against the direct pair solver
        and raise if the tracked pair is not the unique non-trivial one.
    max_jump : float
        Largest accepted parameter change between predictor and corrector.

    Notes
    -----
    The pair is followed by Newton's method in the two curve parameters,
    seeded by linear extrapolation. On eight-shaped curves the trivial and
    non-trivial pairs coincide as point sets at ``+-p0`` but not as curve
    parameters, so continuation passes through without special handling.
    """
    if n < 128:
        raise ValueError("sweep needs n >= 128")
    L = curve.length
    sigma = L * np.arange(n) / n
    u3 = curve.u_of_sigma(sigma)
    q3 = curve.position(u3)
    a0 = critical_a0(curve.profile) if curve.is_eight else None

    k0 = int(np.argmax(norm(q3)))
    kw = {"a0": a0} if curve.is_eight else {}
    start = solve_pair(curve, q3[k0], **kw).non_trivial
    if len(start) != 1:
        raise UniquenessViolated(f"{len(start)} non-trivial pairs at the starting point")
    u1, u2 = _initial_labels(curve, u3[k0], start[0])
    u1, u2, ok = _pair_newton(curve, u1, u2, q3[k0])
    if not ok:
        raise BranchJump("could not refine the starting pair")

    U = np.empty((3, n))
    order = [(k0 + j) % n for j in range(n)]
    prev = None
    for j, k in enumerate(order):
        wrap = 1.0 if k < k0 else 0.0
        u3k = u3[k] + wrap
        if j > 0:
            g1, g2 = u1, u2
            if prev is not None:
                g1, g2 = 2 * u1 - prev[0], 2 * u2 - prev[1]
            prev = (u1, u2)
            n1, n2, ok = _pair_newton(curve, g1, g2, q3[k])
            if not ok or max(abs(n1 - g1), abs(n2 - g2)) > max_jump:
                raise BranchJump(f"continuation lost the pair at sigma={sigma[k]:.6g}")
            u1, u2 = n1, n2
            if curve.is_eight and norm(q3[k]) < 1e-10:
                u1, u2 = _origin_limit(curve, u1, u2, curve.tangent(u3[k]))
        U[:, k] = (u1 - wrap, u2 - wrap, u3[k])
        if verify and not _skip_check(curve, q3[k], a0):
            nt = solve_pair(curve, q3[k], **kw).non_trivial
            if len(nt) != 1:
                raise UniquenessViolated(f"{len(nt)} non-trivial pairs at sigma={sigma[k]:.6g}")
            mine = curve.position([u1, u2])
            theirs = np.array([nt[0].q1, nt[0].q2])
            err = min(np.max(np.abs(mine - theirs)), np.max(np.abs(mine - theirs[::-1])))
            if err > 1e-7:
                raise BranchJump(f"tracked pair differs from the unique pair by {err:.2e} at sigma={sigma[k]:.6g}")

    # the parameters must close up after one loop of q3
    s_bodies = curve.sigma_of_u(U)
    offs = s_bodies - sigma
    if np.max(np.abs(offs[:2, 0] - offs[:2, -1])) > 0.25 * L:
        raise BranchJump("pair did not return to its starting position after one loop")

    q = curve.position(U)
    t = curve.tangent(U)
    det = cross(t[0], t[1])
    rate = np.empty((3, n))
    rate[2] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        rate[0] = cross(-t[2], t[1]) / det
        rate[1] = cross(t[0], -t[2]) / det
    bad = np.abs(det) < 1e-6
    if np.any(bad):
        for i in (0, 1):
            fallback = 1.0 + spectral_derivative(offs[i], L)
            rate[i] = np.where(bad, fallback, rate[i])
    dq = t * rate[..., None]
    J = np.sum(cross(q, dq), axis=0)
    sines = np.stack([np.abs(cross(t[i], t[j])) for i, j in ((0, 1), (0, 2), (1, 2))])
    degenerate = np.min(sines, axis=0) < TANGENT_DEGENERACY
    return Sweep(curve, sigma, U, q, dq, J, rate, degenerate, L)


# ---------------------------------------------------------------------------
# time reparameterization


@dataclass
class Conserved:
    kind: str
    value: float
    potential: PairPotential | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "value": self.value}
        if self.potential is not None:
            out["potential"] = self.potential.describe()
        return out


@dataclass
class Trajectory:
    """Three-body motion sampled on a uniform time grid over one period.

    ``positions`` and ``velocities`` have shape ``(3, N, 2)``. ``state``
    evaluates the underlying construction at arbitrary times.
    """

    t: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    period: float
    conserved: Conserved
    curve_name: str = ""
    evaluator: object = None
    meta: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.t.size

    def state(self, t):
        """Positions and velocities at times ``t`` (periodic in ``period``)."""
        if self.evaluator is None:
            return _spline_state(self, np.asarray(t, dtype=float))
        return self.evaluator(np.asarray(t, dtype=float))

    def shifted(self, body: int, dt: float) -> np.ndarray:
        return self.state(self.t + dt)[0][body]


def _spline_state(traj: Trajectory, t):
    from scipy.interpolate import CubicSpline

    T = traj.period
    tt = np.concatenate([traj.t, [T]])
    out = []
    for arr in (traj.positions, traj.velocities):
        closed = np.concatenate([arr, arr[:, :1]], axis=1)
        spline = CubicSpline(tt, closed, axis=1, bc_type="periodic")
        out.append(spline(np.mod(t, T)))
    return out[0], out[1]


class _Construction:
    """Maps time to the exact sweep geometry through ``t(sigma)``."""

    def __init__(self, sweep: Sweep, speed_fn, dt_dsigma_samples, direction: int):
        self.sweep = sweep
        self.curve = sweep.curve
        L = sweep.length
        w = TrigInterpolant(np.abs(dt_dsigma_samples), L)
        self.w = w
        self.mean = w.mean
        self.anti = w.antiderivative()
        self.period = self.mean * L
        self.direction = direction
        self.speed_fn = speed_fn
        self.offsets = sweep.offsets()
        fine = np.linspace(0.0, L, 8 * sweep.n + 1)
        self._table = (self.tau(fine), fine)

    def tau(self, sigma):
        return self.mean * sigma + self.anti(sigma)

    def sigma_of_tau(self, tau):
        L = self.sweep.length
        loops = np.floor(tau / self.period)
        r = tau - loops * self.period
        s = np.interp(r, *self._table)
        for _ in range(8):
            step = (self.tau(s) - r) / self.w(s)
            s = s - step
            if np.max(np.abs(step), initial=0.0) < 1e-15 * L:
                break
        return s + loops * L

    def geometry(self, sigma):
        """Exact positions and sigma-derivatives of the three bodies."""
        curve = self.curve
        sigma = np.asarray(sigma, dtype=float)
        u3 = curve.u_of_sigma(sigma)
        q3 = curve.position(u3)
        u = np.empty((3,) + sigma.shape)
        u[2] = u3
        for i in (0, 1):
            u[i] = curve.u_of_sigma(sigma + self.offsets[i](np.mod(sigma, self.sweep.length)))
        u[0], u[1] = _pair_newton_many(curve, u[0], u[1], q3)
        q = curve.position(u)
        t = curve.tangent(u)
        det = cross(t[0], t[1])
        rate = np.ones((3,) + sigma.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            r1 = cross(-t[2], t[1]) / det
            r2 = cross(t[0], -t[2]) / det
        bad = np.abs(det) < 1e-6
        if np.any(bad):
            ss = np.mod(sigma, self.sweep.length)
            d = [o.derivative() for o in self.offsets]
            r1 = np.where(bad, 1.0 + d[0](ss), r1)
            r2 = np.where(bad, 1.0 + d[1](ss), r2)
        rate[0], rate[1] = r1, r2
        return q, t * rate[..., None]

    def __call__(self, t):
        tau = self.direction * t
        sigma = self.sigma_of_tau(tau)
        q, dq = self.geometry(sigma)
        sdot = self.direction * self.speed_fn(q, dq)
        pos, vel = q, dq * sdot[..., None]
        if self.direction < 0:
            # keep q2(t) = q1(t + T/3) when traversal is reversed
            pos = pos[[1, 0, 2]]
            vel = vel[[1, 0, 2]]
        return pos, vel


def _assemble(construction: _Construction, N: int, conserved: Conserved, curve: Curve) -> Trajectory:
    T = construction.period
    t = T * np.arange(N) / N
    pos, vel = construction(t)
    meta = {"period": T, "omega": 2 * np.pi / T, "sweep_n": construction.sweep.n}
    return Trajectory(t, pos, vel, T, conserved, curve.name, construction, meta)


def angular_momentum_reparam(sweep: Sweep, c: float, N: int = 1024) -> Trajectory:
    """Time parameterization with constant angular momentum ``c``.

    ``dt/dsigma = J(sigma)/c`` is integrated spectrally; ``c < 0`` reverses
    the direction of motion.
    """
    if c == 0:
        raise ValueError("angular momentum must be non-zero; use energy_reparam for c = 0")
    if np.min(np.abs(sweep.J)) < 1e-12 or np.min(sweep.J) * np.max(sweep.J) < 0:
        k = int(np.argmin(np.abs(sweep.J)))
        raise VanishingJ(f"J vanishes near sigma={sweep.sigma[k]:.6g}")
    w = sweep.J / c
    direction = 1 if w[0] > 0 else -1

    def speed(q, dq):
        return np.abs(c / np.sum(cross(q, dq), axis=0))

    cons = _Construction(sweep, speed, w, direction)
    return _assemble(cons, N, Conserved("angular_momentum", float(c)), sweep.curve)


def energy_reparam(sweep: Sweep, potential: PairPotential, E: float, N: int = 1024,
                   direction: int = 1) -> Trajectory:
    """Time parameterization with constant energy ``E``.

    ``d sigma/dt = sqrt(2 (E - V) / M)`` with ``M = sum |dq_i/dsigma|^2``.
    Raises :class:`TurningPoint` at the first grid point where ``E <= V``.
    """
    V = potential.energy(sweep.q)
    blocked = np.flatnonzero(V >= E)
    if blocked.size:
        s = float(sweep.sigma[blocked[0]])
        raise TurningPoint(f"E={E:.6g} does not exceed V={V[blocked[0]]:.6g} at sigma={s:.6g}", sigma=s)
    M = np.sum(np.sum(sweep.dq**2, axis=-1), axis=0)

    def speed(q, dq):
        m = np.sum(np.sum(dq**2, axis=-1), axis=0)
        return np.sqrt(2.0 * (E - potential.energy(q)) / m)

    w = np.sqrt(M / (2.0 * (E - V)))
    cons = _Construction(sweep, speed, w, 1 if direction >= 0 else -1)
    return _assemble(cons, N, Conserved("energy", float(E), potential), sweep.curve)


def angular_momentum_series(traj: Trajectory) -> np.ndarray:
    return np.sum(cross(traj.positions, traj.velocities), axis=0)


def energy_series(traj: Trajectory, potential: PairPotential) -> np.ndarray:
    K = 0.5 * np.sum(traj.velocities**2, axis=(0, 2))
    return K + potential.energy(traj.positions)


def average_angular_momentum(traj: Trajectory) -> float:
    """Time average of ``sum q_i x dq_i/dt`` over one period."""
    return float(np.mean(angular_momentum_series(traj)))


def choreography_shift_error(traj: Trajectory) -> float:
    """``max_t |q2(t) - q1(t + T/3)|`` and ``|q3(t) - q1(t + 2T/3)|``."""
    T = traj.period
    pos1 = traj.state(traj.t + T / 3)[0][0]
    pos2 = traj.state(traj.t + 2 * T / 3)[0][0]
    return float(max(np.max(norm(traj.positions[1] - pos1)), np.max(norm(traj.positions[2] - pos2))))


def tangent_concurrency(sweep: Sweep, exclude_degenerate: bool = True) -> np.ndarray:
    """Point-to-line defect of the three tangent lines at each sweep sample."""
    from .geometry import Line, concurrency_defect

    out = np.full(sweep.n, np.nan)
    for k in range(sweep.n):
        if exclude_degenerate and sweep.degenerate[k]:
            continue
        lines = [Line(sweep.q[i, k], sweep.dq[i, k]) for i in range(3)]
        out[k] = concurrency_defect(*lines)
    return out


__all__ = [
    "Sweep",
    "Trajectory",
    "Conserved",
    "geometric_sweep",
    "angular_momentum_reparam",
    "energy_reparam",
    "average_angular_momentum",
    "angular_momentum_series",
    "energy_series",
    "choreography_shift_error",
    "tangent_concurrency",
]
