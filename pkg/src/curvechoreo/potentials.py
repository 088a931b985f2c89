"""Pairwise potentials ``V = sum_{i<j} U(r_ij)`` built from basis terms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import SingularSeparation

MIN_SEPARATION = 1e-9
PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class Term:
    """One basis function ``U_k(r)`` with its coefficient.

    ``basis`` is one of ``logr``, ``rpow`` (``r**power``), ``coulomb``
    (``1/r``), ``const`` or ``custom`` (cubic spline through ``table``).
    """

    basis: str
    coefficient: float = 1.0
    power: float | None = None
    table: tuple | None = None

    def __post_init__(self):
        if self.basis not in ("logr", "rpow", "coulomb", "const", "custom"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis == "rpow" and self.power is None:
            raise ValueError("rpow basis needs a power")
        if self.basis == "custom" and self.table is None:
            raise ValueError("custom basis needs a (r, U) table")

    @property
    def label(self) -> str:
        if self.basis == "rpow":
            return "r2" if self.power == 2 else f"rpow:{self.power:g}"
        return self.basis

    def _spline(self):
        r, u = (np.asarray(c, dtype=float) for c in self.table)
        return CubicSpline(r, u)

    def unit_value(self, r):
        r = np.asarray(r, dtype=float)
        if self.basis == "logr":
            return np.log(r)
        if self.basis == "rpow":
            return r**self.power
        if self.basis == "coulomb":
            return 1.0 / r
        if self.basis == "const":
            return np.ones_like(r)
        return self._spline()(r)

    def unit_slope(self, r):
        r = np.asarray(r, dtype=float)
        if self.basis == "logr":
            return 1.0 / r
        if self.basis == "rpow":
            return self.power * r ** (self.power - 1.0)
        if self.basis == "coulomb":
            return -1.0 / (r * r)
        if self.basis == "const":
            return np.zeros_like(r)
        return self._spline().derivative()(r)

    def with_coefficient(self, c: float) -> Term:
        return Term(self.basis, float(c), self.power, self.table)


def parse_basis(name: str) -> Term:
    name = name.strip().lower()
    if name in ("logr", "ln", "log"):
        return Term("logr")
    if name in ("r2", "r^2"):
        return Term("rpow", power=2.0)
    if name.startswith("rpow:"):
        return Term("rpow", power=float(name.split(":", 1)[1]))
    if name in ("coulomb", "1/r"):
        return Term("coulomb")
    if name == "const":
        return Term("const")
    raise ValueError(f"unknown basis {name!r}")


@dataclass(frozen=True)
class PairPotential:
    """``V(q) = sum_{i<j} U(|q_i - q_j|)`` with ``U = sum_k c_k U_k``."""

    terms: tuple

    def U(self, r):
        return sum(t.coefficient * t.unit_value(r) for t in self.terms)

    def dU(self, r):
        return sum(t.coefficient * t.unit_slope(r) for t in self.terms)

    def energy(self, q):
        """Potential energy of positions shaped ``(3, ..., 2)``."""
        q = np.asarray(q, dtype=float)
        total = 0.0
        for i, j in PAIRS:
            r = np.hypot(*np.moveaxis(q[i] - q[j], -1, 0))
            _check(r)
            total = total + self.U(r)
        return total

    def gradient(self, q):
        """``dV/dq_i`` for positions shaped ``(3, ..., 2)``."""
        q = np.asarray(q, dtype=float)
        grad = np.zeros_like(q)
        for i, j in PAIRS:
            d = q[i] - q[j]
            r = np.hypot(d[..., 0], d[..., 1])
            _check(r)
            f = (self.dU(r) / r)[..., None] * d
            grad[i] += f
            grad[j] -= f
        return grad

    def describe(self) -> str:
        return ",".join(f"{t.coefficient:.17g}*{t.label}" for t in self.terms)

    def to_dict(self) -> dict:
        return {"terms": [{"basis": t.label, "coefficient": t.coefficient} for t in self.terms]}


def _check(r):
    if np.any(np.asarray(r) < MIN_SEPARATION):
        raise SingularSeparation(f"pair separation {float(np.min(r)):.3e} below {MIN_SEPARATION:g}")


def harmonic(omega: float) -> PairPotential:
    """Pairwise harmonic potential with angular frequency ``omega`` for three bodies.

    ``U(r) = omega^2 r^2 / 6`` per unordered pair, so that
    ``d^2 q_i/dt^2 = (omega^2/3) sum_{j != i} (q_j - q_i) = -omega^2 q_i``
    when the centre of mass is at O.
    """
    return PairPotential((Term("rpow", omega**2 / 6.0, power=2.0),))


def lemniscate_potential() -> PairPotential:
    """``U(r) = ln(r)/2 - sqrt(3) r^2 / 24``."""
    return PairPotential((Term("logr", 0.5), Term("rpow", -math.sqrt(3.0) / 24.0, power=2.0)))


def newtonian(G: float = 1.0) -> PairPotential:
    return PairPotential((Term("coulomb", -G),))


def parse_potential(text: str) -> PairPotential:
    """Parse ``"0.5*logr,-0.0722*r2"`` or a preset (``lemniscate``, ``harmonic:W``, ``newton``)."""
    text = text.strip()
    low = text.lower()
    if low == "lemniscate":
        return lemniscate_potential()
    if low.startswith("harmonic"):
        omega = float(low.split(":", 1)[1]) if ":" in low else 1.0
        return harmonic(omega)
    if low.startswith("newton"):
        G = float(low.split(":", 1)[1]) if ":" in low else 1.0
        return newtonian(G)
    terms = []
    for part in text.split(","):
        if "*" not in part:
            raise ValueError(f"potential term {part!r} must look like coefficient*basis")
        coeff, name = part.split("*", 1)
        terms.append(parse_basis(name).with_coefficient(float(coeff)))
    if not terms:
        raise ValueError("empty potential")
    return PairPotential(tuple(terms))
