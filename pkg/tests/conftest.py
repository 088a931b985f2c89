from __future__ import annotations

import numpy as np
import pytest

from curvechoreo.choreography import angular_momentum_reparam, energy_reparam, geometric_sweep
from curvechoreo.curves import Ellipse, Lemniscate
from curvechoreo.potentials import lemniscate_potential
from curvechoreo.verification import calibrate_modulus, oracle_energy

# frozen from calibrate_modulus (the oracle is checked independently in test_verification)
LEMNISCATE_K = 0.9659258262890684
LEMNISCATE_E = 0.2386928131105545


@pytest.fixture(scope="session")
def ellipse():
    return Ellipse(2.0, 1.0)


@pytest.fixture(scope="session")
def lemniscate():
    return Lemniscate()


@pytest.fixture(scope="session")
def ellipse_sweep(ellipse):
    return geometric_sweep(ellipse, n=256)


@pytest.fixture(scope="session")
def ellipse_traj(ellipse_sweep):
    return angular_momentum_reparam(ellipse_sweep, 6.0, N=1024)


@pytest.fixture(scope="session")
def lemniscate_sweep(lemniscate):
    return geometric_sweep(lemniscate, n=512)


@pytest.fixture(scope="session")
def calibration():
    return calibrate_modulus()


@pytest.fixture(scope="session")
def lemniscate_traj(lemniscate_sweep, calibration):
    E = oracle_energy(calibration.k)
    return energy_reparam(lemniscate_sweep, lemniscate_potential(), E, N=2048)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def _report(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
        print(line)
        lines.append(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
