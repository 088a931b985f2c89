"""Closed-form oracles and equation-of-motion checks for constructed motions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize

from .choreography import Trajectory
from .errors import ModulusOutOfRange, RankDeficient
from .potentials import PAIRS, PairPotential, Term, _check, lemniscate_potential

_EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# ellipse and harmonic oscillator


@dataclass(frozen=True)
class EllipseOracle:
    """Harmonic choreography on ``x^2/a^2 + y^2/b^2 = 1`` with angular momentum ``c``."""

    a: float
    b: float
    c: float

    @property
    def omega(self) -> float:
        return self.c / (3.0 * self.a * self.b)

    @property
    def period(self) -> float:
        return 2.0 * np.pi / abs(self.omega)

    def positions(self, t):
        """Shape ``(3, ..., 2)``; body ``i`` leads body 3 by ``(3 - i) T / 3``."""
        t = np.asarray(t, dtype=float)
        w = self.omega
        shifts = (self.period / 3.0, 2.0 * self.period / 3.0, 0.0)
        return np.stack([np.stack([self.a * np.cos(w * (t + s)), self.b * np.sin(w * (t + s))], -1)
                         for s in shifts])

    def constants(self) -> dict:
        return ellipse_oracle_constants(self.a, self.b, abs(self.omega))


def ellipse_oracle_constants(a: float, b: float, omega: float) -> dict:
    """Kinetic energy, potential energy and moment of inertia of the harmonic ellipse motion."""
    if not (a > 0 and b > 0 and omega > 0):
        raise ValueError("a, b and omega must be positive")
    KV = 0.75 * omega**2 * (a * a + b * b)
    return {"K": KV, "V": KV, "I": 1.5 * (a * a + b * b)}


def measured_constants(traj: Trajectory, potential: PairPotential) -> dict:
    """Time averages of K, V and I over the trajectory samples."""
    K = 0.5 * np.sum(traj.velocities**2, axis=(0, 2))
    V = potential.energy(traj.positions)
    I = np.sum(traj.positions**2, axis=(0, 2))
    return {"K": float(np.mean(K)), "V": float(np.mean(V)), "I": float(np.mean(I)),
            "K_std": float(np.std(K)), "V_std": float(np.std(V)), "I_std": float(np.std(I))}


# ---------------------------------------------------------------------------
# Jacobi elliptic functions


def _agm_table(k: float):
    a, b, c = 1.0, math.sqrt((1.0 - k) * (1.0 + k)), k
    A, C = [a], [c]
    while abs(c) > _EPS * a and len(A) < 64:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        A.append(a)
        C.append(c)
    return A, C


def _check_modulus(k: float):
    if not (0.0 <= k < 1.0) or not math.isfinite(k):
        raise ModulusOutOfRange(f"modulus k={k} outside [0, 1)")


@lru_cache(maxsize=64)
def quarter_period(k: float) -> float:
    """Complete elliptic integral ``K(k) = pi / (2 AGM(1, k'))``."""
    _check_modulus(k)
    A, _ = _agm_table(k)
    return math.pi / (2.0 * A[-1])


def jacobi_sn_cn_dn(t, k: float):
    """``sn, cn, dn`` by the descending Landen (AGM) transformation.

    The argument is first reduced modulo the real period ``4K`` so that the
    scaled angle ``2^N a_N t`` stays small.
    """
    _check_modulus(k)
    t = np.asarray(t, dtype=float)
    if k == 0.0:
        return np.sin(t), np.cos(t), np.ones_like(t)
    A, C = _agm_table(k)
    P = 4.0 * quarter_period(k)
    t = t - P * np.round(t / P)
    N = len(A) - 1
    phi = (2.0**N) * A[N] * t
    for n in range(N, 0, -1):
        phi = 0.5 * (phi + np.arcsin(C[n] / A[n] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - (k * sn) ** 2)
    return sn, cn, dn


@dataclass(frozen=True)
class EllipticFunctionContext:
    k: float

    def __post_init__(self):
        _check_modulus(self.k)

    @property
    def K(self) -> float:
        return quarter_period(self.k)

    def __call__(self, t):
        return jacobi_sn_cn_dn(t, self.k)

    def identity_residual(self, t) -> float:
        sn, cn, dn = self(t)
        return float(max(np.max(np.abs(sn**2 + cn**2 - 1.0)), np.max(np.abs(dn**2 + (self.k * sn) ** 2 - 1.0))))


# ---------------------------------------------------------------------------
# lemniscate oracle


def lemniscate_oracle(t, k: float):
    """``(sn, sn cn) / (1 + cn^2)``: a point on the lemniscate for every ``t``."""
    sn, cn, _ = jacobi_sn_cn_dn(t, k)
    d = 1.0 + cn * cn
    return np.stack([sn / d, sn * cn / d], -1)


def lemniscate_oracle_state(t, k: float):
    """Positions and velocities of the three bodies at ``t, t + T/3, t + 2T/3``.

    Velocities use ``d sn/dt = cn dn`` and ``d cn/dt = -sn dn``.
    """
    t = np.asarray(t, dtype=float)
    T = 4.0 * quarter_period(k)
    pos, vel = [], []
    for j in range(3):
        sn, cn, dn = jacobi_sn_cn_dn(t + j * T / 3.0, k)
        d = 1.0 + cn * cn
        dsn, dcn = cn * dn, -sn * dn
        dd = 2.0 * cn * dcn
        x, y = sn / d, sn * cn / d
        vx = dsn / d - sn * dd / d**2
        vy = (dsn * cn + sn * dcn) / d - sn * cn * dd / d**2
        pos.append(np.stack([x, y], -1))
        vel.append(np.stack([vx, vy], -1))
    return np.stack(pos), np.stack(vel)


def membership_residual(points) -> float:
    p = np.asarray(points, dtype=float)
    x2, y2 = p[..., 0] ** 2, p[..., 1] ** 2
    return float(np.max(np.abs((x2 + y2) ** 2 - (x2 - y2))))


def oracle_com_residual(k: float, n: int = 256) -> float:
    """Largest ``|q(t) + q(t + T/3) + q(t + 2T/3)|`` over one period."""
    T = 4.0 * quarter_period(k)
    t = T * np.arange(n) / n
    pos, _ = lemniscate_oracle_state(t, k)
    return float(np.max(np.abs(pos.sum(axis=0))))


@dataclass
class Calibration:
    k: float
    K: float
    period: float
    com_residual: float
    membership_residual: float


def calibrate_modulus(lo: float = 0.5, hi: float = 0.99, tau: float = 0.1) -> Calibration:
    """Modulus for which the elliptic lemniscate motion is a three-body choreography.

    The lemniscate membership of ``lemniscate_oracle`` holds identically in
    ``k``, so it cannot fix the modulus. The centre-of-mass condition does:
    the x-component of ``q(t) + q(t + T/3) + q(t + 2T/3)`` at ``t = tau T``
    changes sign once on ``[lo, hi]`` and its root is found by Brent's method.
    """

    def h(k):
        T = 4.0 * quarter_period(k)
        pos, _ = lemniscate_oracle_state(np.array([tau * T]), k)
        return float(pos.sum(axis=0)[0, 0])

    k = optimize.brentq(h, lo, hi, xtol=1e-16, rtol=4 * _EPS, maxiter=200)
    K = quarter_period(k)
    grid = 4 * K * np.arange(1000) / 1000
    return Calibration(k, K, 4 * K, oracle_com_residual(k), membership_residual(lemniscate_oracle(grid, k)))


def oracle_energy(k: float, potential: PairPotential | None = None, t: float = 0.3) -> float:
    """Total energy ``K + V`` of the elliptic-function motion."""
    potential = potential or lemniscate_potential()
    pos, vel = lemniscate_oracle_state(np.array([t]), k)
    return float(0.5 * np.sum(vel**2) + potential.energy(pos)[0])


def oracle_match(traj: Trajectory, k: float) -> dict:
    """Compare a lemniscate trajectory with the elliptic-function motion.

    Time is normalized by the period. The oracle is matched with either
    time orientation and with a fitted phase; the error is the largest
    position difference over all bodies and samples.
    """
    T_or = 4.0 * quarter_period(k)
    s = traj.t / traj.period
    body = traj.positions[2]

    def err(phase, sign):
        q = lemniscate_oracle(T_or * (phase + sign * s), k)
        return float(np.max(np.abs(q - body)))

    best = None
    coarse = np.arange(400) / 400
    for sign in (1.0, -1.0):
        errs = [err(p, sign) for p in coarse]
        p0 = coarse[int(np.argmin(errs))]
        res = optimize.minimize_scalar(lambda p: err(p, sign), bounds=(p0 - 1 / 400, p0 + 1 / 400),
                                       method="bounded", options={"xatol": 1e-13})
        if best is None or res.fun < best[0]:
            best = (res.fun, res.x, sign)
    _, phase, sign = best
    # q1(t) = q3(t + T/3), q2(t) = q3(t + 2T/3)
    oracle = np.stack([lemniscate_oracle(T_or * (phase + sign * (s + shift)), k) for shift in (1 / 3, 2 / 3, 0.0)])
    error = float(np.max(np.abs(oracle - traj.positions)))
    return {"error": error, "phase": float(phase), "time_sign": int(sign),
            "period_ratio": traj.period / T_or}


# ---------------------------------------------------------------------------
# equation of motion


def fd_acceleration(traj: Trajectory) -> np.ndarray:
    """Centered second difference with periodic wrap-around."""
    h = traj.period / traj.N
    q = traj.positions
    return (np.roll(q, -1, axis=1) - 2.0 * q + np.roll(q, 1, axis=1)) / (h * h)


def eom_residual(traj: Trajectory, potential: PairPotential) -> float:
    """``max |a_i + dV/dq_i|`` over bodies and samples."""
    acc = fd_acceleration(traj)
    grad = potential.gradient(traj.positions)
    return float(np.max(np.hypot(*np.moveaxis(acc + grad, -1, 0))))


@dataclass
class FitResult:
    basis: list
    coefficients: dict
    max_residual: float
    rms_residual: float
    rank: int
    N: int
    singular_values: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    degenerate: bool = False

    def potential(self) -> PairPotential:
        from .potentials import parse_basis

        return PairPotential(tuple(parse_basis(b).with_coefficient(c) for b, c in self.coefficients.items()))

    def to_dict(self) -> dict:
        return {
            "basis": self.basis,
            "coefficients": self.coefficients,
            "excluded": self.excluded,
            "residual": {"max": self.max_residual, "rms": self.rms_residual},
            "rank": self.rank,
            "N": self.N,
            "singular_values": self.singular_values,
            "degenerate": self.degenerate,
        }


def fit_pair_potential(traj: Trajectory, basis, rcond: float = 1e-10) -> FitResult:
    """Least-squares coefficients of a pairwise potential supporting the motion.

    Each body, sample and coordinate gives one equation
    ``a_i = -sum_k c_k sum_j U_k'(r_ij) (q_i - q_j) / r_ij``, linear in the
    coefficients. Basis terms with identically zero gradient (constants) are
    excluded and reported, since their coefficient is unidentifiable.
    """
    from .potentials import parse_basis

    terms = [parse_basis(b) if isinstance(b, str) else b for b in basis]
    labels = [t.label for t in terms]
    if len(terms) < 1:
        raise ValueError("need at least one basis term")
    q = traj.positions
    acc = fd_acceleration(traj)
    cols, kept, excluded = [], [], []
    for term, label in zip(terms, labels):
        g = np.zeros_like(q)
        for i, j in PAIRS:
            d = q[i] - q[j]
            r = np.hypot(d[..., 0], d[..., 1])
            _check(r)
            f = (term.unit_slope(r) / r)[..., None] * d
            g[i] += f
            g[j] -= f
        col = -g.reshape(-1)
        if np.max(np.abs(col)) == 0.0:
            excluded.append(label)
            continue
        cols.append(col)
        kept.append(label)
    if not cols:
        raise RankDeficient("no basis term has a non-zero gradient")
    A = np.column_stack(cols)
    y = acc.reshape(-1)
    scale = np.linalg.norm(A, axis=0)
    coef, _, rank, sv = np.linalg.lstsq(A / scale, y, rcond=None)
    if sv[-1] < rcond * sv[0] or rank < A.shape[1]:
        raise RankDeficient(f"design matrix is rank deficient (singular values {sv.tolist()})")
    coef = coef / scale
    res = A @ coef - y
    per_body = np.hypot(*np.moveaxis(res.reshape(q.shape), -1, 0))
    degenerate = bool(np.max(np.abs(y)) < 1e-12)
    return FitResult(labels, dict(zip(kept, coef.tolist())), float(np.max(per_body)),
                     float(np.sqrt(np.mean(per_body**2))), int(rank), traj.N, sv.tolist(), excluded, degenerate)


__all__ = [
    "EllipseOracle",
    "ellipse_oracle_constants",
    "measured_constants",
    "jacobi_sn_cn_dn",
    "quarter_period",
    "EllipticFunctionContext",
    "lemniscate_oracle",
    "lemniscate_oracle_state",
    "membership_residual",
    "oracle_com_residual",
    "calibrate_modulus",
    "Calibration",
    "oracle_energy",
    "oracle_match",
    "fd_acceleration",
    "eom_residual",
    "fit_pair_potential",
    "FitResult",
    "Term",
]
