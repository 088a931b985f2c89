"""CSV and JSON artifacts: trajectories, sweeps, diagnostics and fit reports."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .choreography import (
    Conserved,
    Sweep,
    Trajectory,
    angular_momentum_series,
    choreography_shift_error,
    energy_series,
)
from .potentials import PairPotential, parse_potential

TRAJECTORY_SCHEMA = "curvechoreo-trajectory"
SWEEP_SCHEMA = "curvechoreo-sweep"
SCHEMA_VERSION = 1

TRAJECTORY_COLUMNS = ["t"] + [f"{c}{i}" for i in (1, 2, 3) for c in ("x", "y")] + \
    [f"v{c}{i}" for i in (1, 2, 3) for c in ("x", "y")]


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def _write_table(path, header: dict, columns, data) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {k}: {_fmt(v)}" for k, v in header.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(f"{x:.17g}" for x in row) for row in data)
    path.write_text("\n".join(lines) + "\n")
    return path


def _read_table(path):
    meta = {}
    rows = []
    columns = None
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif columns is None:
            columns = line.strip().split(",")
        elif line.strip():
            rows.append([float(x) for x in line.split(",")])
    if columns is None:
        raise ValueError(f"{path}: no column header")
    return meta, columns, np.array(rows, dtype=float).reshape(-1, len(columns))


def write_trajectory_csv(traj: Trajectory, path, extra: dict | None = None) -> Path:
    header = {
        "schema": TRAJECTORY_SCHEMA,
        "version": SCHEMA_VERSION,
        "curve": traj.curve_name,
        "conserved": traj.conserved.kind,
        "conserved_value": traj.conserved.value,
    }
    if traj.conserved.potential is not None:
        header["potential"] = traj.conserved.potential.describe()
    header["period"] = traj.period
    header["omega"] = 2 * np.pi / traj.period
    header["N"] = traj.N
    header.update(extra or {})
    data = np.column_stack([traj.t, traj.positions.transpose(1, 0, 2).reshape(traj.N, 6),
                            traj.velocities.transpose(1, 0, 2).reshape(traj.N, 6)])
    return _write_table(path, header, TRAJECTORY_COLUMNS, data)


def read_trajectory_csv(path) -> Trajectory:
    """Load a trajectory; state at off-grid times comes from periodic splines."""
    meta, columns, data = _read_table(path)
    if meta.get("schema") != TRAJECTORY_SCHEMA:
        raise ValueError(f"{path}: not a trajectory file")
    if int(meta.get("version", 0)) != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported trajectory schema version {meta.get('version')}")
    if columns != TRAJECTORY_COLUMNS:
        raise ValueError(f"{path}: unexpected columns {columns}")
    N = data.shape[0]
    pos = data[:, 1:7].reshape(N, 3, 2).transpose(1, 0, 2)
    vel = data[:, 7:13].reshape(N, 3, 2).transpose(1, 0, 2)
    potential = parse_potential(meta["potential"]) if "potential" in meta else None
    conserved = Conserved(meta.get("conserved", "unknown"), float(meta.get("conserved_value", "nan")), potential)
    return Trajectory(data[:, 0].copy(), pos, vel, float(meta["period"]), conserved,
                      meta.get("curve", ""), None, dict(meta))


def write_sweep_csv(sweep: Sweep, path) -> Path:
    header = {"schema": SWEEP_SCHEMA, "version": SCHEMA_VERSION, "curve": sweep.curve.name,
              "length": sweep.length, "n": sweep.n}
    cols = ["sigma", "sigma1", "sigma2"] + [f"{c}{i}" for i in (1, 2, 3) for c in ("x", "y")] + \
        [f"d{c}{i}" for i in (1, 2, 3) for c in ("x", "y")] + ["J", "degenerate"]
    s = sweep.sigma_bodies
    data = np.column_stack([sweep.sigma, s[0], s[1],
                            sweep.q.transpose(1, 0, 2).reshape(sweep.n, 6),
                            sweep.dq.transpose(1, 0, 2).reshape(sweep.n, 6),
                            sweep.J, sweep.degenerate.astype(float)])
    return _write_table(path, header, cols, data)


def diagnostics(traj: Trajectory, potential: PairPotential | None = None) -> dict:
    """Summary of conservation and symmetry checks for a trajectory."""
    L = angular_momentum_series(traj)
    out = {
        "curve": traj.curve_name,
        "conserved": traj.conserved.to_dict(),
        "period": traj.period,
        "omega": 2 * np.pi / traj.period,
        "N": traj.N,
        "centre_of_mass_max": float(np.max(np.abs(traj.positions.sum(axis=0)))),
        "angular_momentum_mean": float(np.mean(L)),
        "angular_momentum_std": float(np.std(L)),
        "closure": float(np.max(np.abs(traj.state(np.array([traj.period]))[0][:, 0] - traj.positions[:, 0]))),
        "choreography_shift": choreography_shift_error(traj),
    }
    potential = potential or traj.conserved.potential
    if potential is not None:
        from .verification import eom_residual

        H = energy_series(traj, potential)
        out["energy_mean"] = float(np.mean(H))
        out["energy_std"] = float(np.std(H))
        out["eom_residual"] = eom_residual(traj, potential)
        out["potential"] = potential.describe()
    out.update({k: v for k, v in traj.meta.items() if k not in out})
    return out
