#!/usr/bin/env python3
"""Equal-time thirds on an ellipse.

On a centred ellipse the pair problem has the closed-form answer
q1 = q(u + 1/3), q2 = q(u + 2/3) in the ellipse's angle parameter. Sweeping
body 3 once around and fixing the angular momentum gives a choreography
that is exact for the harmonic pair force, with omega = c / (3 a b).
"""
from __future__ import annotations

import numpy as np

from curvechoreo import Ellipse, angular_momentum_reparam, geometric_sweep, solve_pair
from curvechoreo.potentials import harmonic, newtonian
from curvechoreo.verification import ellipse_oracle_constants, eom_residual, fit_pair_potential, measured_constants

a, b, c = 2.0, 1.0, 6.0
ell = Ellipse(a, b)

q3 = ell.position(0.1)
(pair,) = solve_pair(ell, q3).pairs
print("q3 =", q3)
print("q1 =", pair.q1, " expected", ell.position(0.1 + 1 / 3))
print("q2 =", pair.q2, " expected", ell.position(0.1 + 2 / 3))

sweep = geometric_sweep(ell, n=256)
traj = angular_momentum_reparam(sweep, c, N=1024)
omega = 2 * np.pi / traj.period
print(f"\nperiod {traj.period:.12f}   omega {omega:.12f}   expected {c / (3 * a * b):.12f}")

m = measured_constants(traj, harmonic(omega))
ref = ellipse_oracle_constants(a, b, omega)
for key in ("K", "V", "I"):
    print(f"  {key}: measured {m[key]:.10f}   closed form {ref[key]:.10f}")

print(f"\nEOM residual, harmonic: {eom_residual(traj, harmonic(omega)):.2e}")
print(f"EOM residual, newtonian: {eom_residual(traj, newtonian()):.2e}   (not a solution)")

fit = fit_pair_potential(traj, ["r2"])
print(f"fitted r^2 coefficient {fit.coefficients['r2']:.8f}   (omega^2 / 6 = {omega**2 / 6:.8f})")
