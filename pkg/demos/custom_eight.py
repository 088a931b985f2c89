#!/usr/bin/env python3
"""An eight built from a polynomial profile.

f(x) = x sqrt(1 - x^2) traces the lemniscate of Gerono, y^2 = x^2 - x^4.
The profile is odd and has a vertical tangent at the tip, so the same
pipeline produces a choreography. The pair potential is then unknown; a least-squares fit on a
small basis shows how well simple laws explain the motion.
"""
from __future__ import annotations

import numpy as np

from curvechoreo import (
    ProfileEight,
    average_angular_momentum,
    check_conditions,
    choreography_shift_error,
    critical_a0,
    energy_reparam,
    geometric_sweep,
    polynomial_profile,
    tangent_concurrency,
)
from curvechoreo.potentials import lemniscate_potential
from curvechoreo.verification import eom_residual, fit_pair_potential

prof = polynomial_profile([0.0, 1.0], sqrt_tip=True, tip="1-x^2")
report = check_conditions(prof)
for name, r in report.results.items():
    print(f"condition {name}: {'ok' if r.passed else 'fails'}  {r.detail}")

print(f"\na0 = {critical_a0(prof):.12f}")

curve = ProfileEight(prof)
sweep = geometric_sweep(curve, n=512)
print(f"sweep centre-of-mass error {sweep.max_com_error():.1e}, monotone {sweep.monotone}")
# unlike the lemniscate, the geometric angular momentum is not zero along the
# sweep and the three tangents do not meet. Angular momentum then averages to
# zero without being constant, so no central pair force produces this motion
print(f"max |J| {np.max(np.abs(sweep.J)):.3f}, max tangent defect {np.nanmax(tangent_concurrency(sweep)):.3f}")

# time it with the lemniscate law at a comfortable energy
pot = lemniscate_potential()
E = float(np.max(pot.energy(sweep.q))) + 0.1
traj = energy_reparam(sweep, pot, E, N=2048)
print(f"period {traj.period:.8f}, mean angular momentum {average_angular_momentum(traj):.1e}")
print(f"shift error {choreography_shift_error(traj):.1e}")

for basis in (["logr", "r2"], ["logr", "r2", "coulomb"], ["logr", "r2", "coulomb", "rpow:4"]):
    fit = fit_pair_potential(traj, basis)
    coef = ", ".join(f"{k} {v:+.5f}" for k, v in fit.coefficients.items())
    print(f"fit {basis}: {coef}; EOM residual {eom_residual(traj, fit.potential()):.2e}")

# no pair law explains the motion exactly: the residual stays far above the
# discretization level seen on the lemniscate
