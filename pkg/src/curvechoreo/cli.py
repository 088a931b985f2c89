"""Command-line interface: ``curvechoreo <command> [options]``.

Commands
--------
solve        pair solution for one position of q3 (JSON)
sweep        pair solutions around the whole curve (CSV)
choreograph  time-parameterized motion (CSV plus JSON diagnostics)
verify       equation-of-motion and conservation checks on a trajectory CSV
fit          least-squares pair potential from a trajectory CSV
validate     check a configuration without running it

Exit codes: 0 success, 2 configuration error, 3 verification threshold
exceeded, 4 validation found violations, 10-52 solver errors (see
``curvechoreo.errors``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .choreography import angular_momentum_reparam, energy_reparam, geometric_sweep
from .curves import (
    Curve,
    Ellipse,
    Lemniscate,
    ProfileEight,
    check_conditions,
    curve_from_dict,
    load_curve,
    polynomial_profile,
)
from .errors import ChoreoError, ConfigError
from .pairs import solve_pair
from .potentials import parse_basis, parse_potential

OUTPUT_DIR_ENV = "CURVECHOREO_OUTPUT_DIR"
EXIT_VERIFY_FAILED = 3
EXIT_INVALID = 4
COMMANDS = ("solve", "sweep", "choreograph", "verify", "fit", "validate")

# keys accepted from a configuration file, by command
_KEYS = {
    "common": {"curve", "curve_file", "a", "b", "radius", "coefficients", "sqrt_tip", "tip", "out", "output_dir"},
    "solve": {"q3", "u"},
    "sweep": {"n"},
    "choreograph": {"n", "N", "c", "potential", "E", "mode"},
    "verify": {"trajectory", "potential", "max_residual"},
    "fit": {"trajectory", "basis"},
}


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def get(self, key, default=None):
        v = self.params.get(key)
        return default if v is None else v


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, field_name: str, message: str):
        self.violations.append({"field": field_name, "message": message})

    def warn(self, field_name: str, message: str):
        self.warnings.append({"field": field_name, "message": message})

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "warnings": self.warnings}


# ---------------------------------------------------------------------------
# configuration


def build_curve(config: RunConfig) -> Curve:
    if config.get("curve_file"):
        return load_curve(config.get("curve_file"))
    kind = config.get("curve")
    if kind is None:
        raise ConfigError("curve: no curve given (use --curve or --curve-file)")
    if isinstance(kind, dict):
        return curve_from_dict(kind)
    kind = str(kind).lower()
    if kind == "ellipse":
        a, b = config.get("a"), config.get("b")
        if a is None or b is None:
            raise ConfigError("a: ellipse needs both --a and --b")
        return Ellipse(float(a), float(b))
    if kind == "circle":
        r = float(config.get("radius", 1.0))
        return Ellipse(r, r)
    if kind == "lemniscate":
        return Lemniscate()
    if kind in ("eight_profile", "polynomial"):
        coeffs = config.get("coefficients")
        if coeffs is None:
            raise ConfigError("coefficients: polynomial eight profile needs --coefficients")
        if isinstance(coeffs, str):
            coeffs = [float(c) for c in coeffs.split(",")]
        return ProfileEight(polynomial_profile(coeffs, sqrt_tip=bool(config.get("sqrt_tip", True)),
                                               tip=config.get("tip", "1-x")))
    raise ConfigError(f"curve: unknown curve kind {kind!r}")


def _vec(text, name):
    if isinstance(text, (list, tuple)):
        vals = [float(v) for v in text]
    else:
        try:
            vals = [float(v) for v in str(text).split(",")]
        except ValueError as exc:
            raise ConfigError(f"{name}: cannot parse {text!r}") from exc
    if len(vals) != 2:
        raise ConfigError(f"{name}: expected two comma-separated numbers")
    return np.array(vals)


def _q3(config: RunConfig, curve: Curve):
    if config.get("q3") is not None:
        return _vec(config.get("q3"), "q3")
    if config.get("u") is not None:
        return curve.position(float(config.get("u")))
    if curve.is_eight and config.get("a") is not None:
        a = float(config.get("a"))
        if not (0.0 < a <= 1.0):
            raise ConfigError("a: eight abscissa must lie in (0, 1]")
        return np.array([a, float(curve.profile(a))])
    raise ConfigError("q3: give --q3, --u, or --a for eight-shaped curves")


def validate(config: RunConfig) -> ValidationReport:
    """Collect every configuration problem without running anything."""
    rep = ValidationReport()
    cmd = config.command
    if cmd not in COMMANDS:
        rep.add("command", f"unknown command {cmd!r}")
        return rep
    allowed = _KEYS["common"] | _KEYS.get(cmd, set()) | set().union(*_KEYS.values())
    for key in config.params:
        if key not in allowed and key != "config":
            rep.add(key, "unknown configuration key")

    needs_curve = cmd in ("solve", "sweep", "choreograph") or (cmd == "validate" and (
        config.get("curve") or config.get("curve_file")))
    curve = None
    if needs_curve:
        try:
            curve = build_curve(config)
        except ConfigError as exc:
            field_name = str(exc).split(":", 1)[0]
            rep.add(field_name, str(exc))
        except (ValueError, OSError, KeyError) as exc:
            rep.add("curve", str(exc))
    if curve is not None and curve.is_eight:
        report = check_conditions(curve)
        for name, res in report.failures.items():
            msg = f"condition ({name}) fails near x={res.witness:.6g}" if res.witness is not None else \
                f"condition ({name}) fails"
            if name == "VI":
                rep.warn("curve", msg)
            else:
                rep.add("curve", msg)

    if cmd == "solve" and curve is not None:
        try:
            _q3(config, curve)
        except ConfigError as exc:
            rep.add(str(exc).split(":", 1)[0], str(exc))
    if cmd in ("sweep", "choreograph"):
        n = config.get("n", 512)
        if int(n) < 128:
            rep.add("n", "sweep grid needs n >= 128")
    if cmd == "choreograph":
        has_c = config.get("c") is not None
        has_pot = config.get("potential") is not None
        if has_c and has_pot:
            rep.add("c", "give either c (angular momentum) or potential and E (energy), not both")
        elif not has_c and not has_pot:
            rep.add("c", "choreograph needs c or potential and E")
        if has_pot:
            if config.get("E") is None:
                rep.add("E", "energy mode requires E")
            try:
                parse_potential(config.get("potential"))
            except ValueError as exc:
                rep.add("potential", str(exc))
        if has_c and float(config.get("c")) == 0.0:
            rep.add("c", "angular momentum must be non-zero")
        if curve is not None and curve.is_eight and has_c:
            rep.add("c", "eight-shaped curves have zero angular momentum; use energy mode")
    if cmd in ("verify", "fit"):
        traj = config.get("trajectory")
        if traj is None:
            rep.add("trajectory", f"{cmd} needs a trajectory CSV")
        elif not Path(traj).exists():
            rep.add("trajectory", f"file not found: {traj}")
    if cmd == "verify" and config.get("potential") is not None:
        try:
            parse_potential(config.get("potential"))
        except ValueError as exc:
            rep.add("potential", str(exc))
    if cmd == "fit":
        basis = config.get("basis")
        if basis is None:
            rep.add("basis", "fit needs a basis list")
        else:
            try:
                for b in _basis_list(basis):
                    parse_basis(b)
            except ValueError as exc:
                rep.add("basis", str(exc))
    return rep


def _basis_list(basis):
    return basis if isinstance(basis, (list, tuple)) else [b for b in str(basis).split(",") if b.strip()]


# ---------------------------------------------------------------------------
# running


def _output_path(config: RunConfig, default_name: str) -> Path:
    out = config.get("out")
    base = config.get("output_dir") or os.environ.get(OUTPUT_DIR_ENV) or "."
    path = Path(out) if out else Path(default_name)
    return path if path.is_absolute() else Path(base) / path


def _emit(obj, config: RunConfig, stream):
    text = io.dumps(obj)
    if config.get("out"):
        path = _output_path(config, "")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    stream.write(text)


def run(config: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    report = validate(config)
    if config.command == "validate":
        stream.write(io.dumps(report.to_dict()))
        return 0 if report.ok else EXIT_INVALID
    if not report.ok:
        first = report.violations[0]
        raise ConfigError(f"{first['field']}: {first['message']}")

    cmd = config.command
    if cmd == "solve":
        curve = build_curve(config)
        q3 = _q3(config, curve)
        sol = solve_pair(curve, q3)
        _emit({"curve": curve.to_dict(), **sol.to_dict()}, config, stream)
        return 0

    if cmd == "sweep":
        curve = build_curve(config)
        sweep = geometric_sweep(curve, int(config.get("n", 512)))
        path = io.write_sweep_csv(sweep, _output_path(config, "sweep.csv"))
        stream.write(io.dumps({"sweep": str(path), "n": sweep.n, "length": sweep.length,
                               "monotone": sweep.monotone, "centre_of_mass_max": sweep.max_com_error()}))
        return 0

    if cmd == "choreograph":
        curve = build_curve(config)
        sweep = geometric_sweep(curve, int(config.get("n", 512)))
        N = int(config.get("N", 1024))
        if config.get("c") is not None:
            traj = angular_momentum_reparam(sweep, float(config.get("c")), N=N)
            potential = None
        else:
            potential = parse_potential(config.get("potential"))
            traj = energy_reparam(sweep, potential, float(config.get("E")), N=N)
        diag = io.diagnostics(traj, potential)
        csv_path = _output_path(config, "trajectory.csv")
        io.write_trajectory_csv(traj, csv_path, {"measured_omega": diag["omega"]})
        json_path = csv_path.with_suffix(".json")
        io.write_json(diag, json_path)
        stream.write(io.dumps({"trajectory": str(csv_path), "diagnostics": str(json_path), **diag}))
        return 0

    if cmd == "verify":
        traj = io.read_trajectory_csv(config.get("trajectory"))
        potential = parse_potential(config.get("potential")) if config.get("potential") else \
            traj.conserved.potential
        diag = io.diagnostics(traj, potential)
        _emit(diag, config, stream)
        limit = config.get("max_residual")
        if limit is not None and diag.get("eom_residual", np.inf) > float(limit):
            return EXIT_VERIFY_FAILED
        return 0

    if cmd == "fit":
        from .verification import fit_pair_potential

        traj = io.read_trajectory_csv(config.get("trajectory"))
        fit = fit_pair_potential(traj, _basis_list(config.get("basis")))
        _emit({"curve": traj.curve_name, "conserved": traj.conserved.to_dict(), **fit.to_dict()}, config, stream)
        return 0
    raise ConfigError(f"command: unknown command {cmd!r}")


# ---------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvechoreo", description="Three-body choreographies on prescribed curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def curve_opts(sp):
        sp.add_argument("--curve", help="ellipse, circle, lemniscate or polynomial")
        sp.add_argument("--curve-file", dest="curve_file", help="JSON curve definition")
        sp.add_argument("--a", type=float, help="ellipse semi-axis, or eight abscissa of q3 for solve")
        sp.add_argument("--b", type=float, help="ellipse semi-axis")
        sp.add_argument("--radius", type=float)
        sp.add_argument("--coefficients", help="polynomial profile coefficients, increasing powers")
        sp.add_argument("--sqrt-tip", dest="sqrt_tip", action=argparse.BooleanOptionalAction, default=None)
        sp.add_argument("--tip", choices=["1-x", "1-x^2"], help="square-root factor of the profile tip")

    def common(sp):
        sp.add_argument("--config", help="JSON configuration file; flags override its values")
        sp.add_argument("--out", help="output file")
        sp.add_argument("--output-dir", dest="output_dir", help=f"output directory (default ${OUTPUT_DIR_ENV} or .)")

    sp = sub.add_parser("solve", help="pair solution for one q3")
    curve_opts(sp)
    common(sp)
    sp.add_argument("--q3", help="x,y")
    sp.add_argument("--u", type=float, help="curve parameter of q3")

    sp = sub.add_parser("sweep", help="pair solutions around the curve")
    curve_opts(sp)
    common(sp)
    sp.add_argument("--n", type=int)

    sp = sub.add_parser("choreograph", help="build a time-parameterized choreography")
    curve_opts(sp)
    common(sp)
    sp.add_argument("--n", type=int, help="sweep grid size")
    sp.add_argument("--N", type=int, help="time samples")
    sp.add_argument("--c", type=float, help="angular momentum")
    sp.add_argument("--potential", help="e.g. lemniscate, harmonic:1, or 0.5*logr,-0.0722*r2")
    sp.add_argument("--E", type=float, help="energy (required with --potential)")

    sp = sub.add_parser("verify", help="check a trajectory against a potential")
    common(sp)
    sp.add_argument("--trajectory")
    sp.add_argument("--potential")
    sp.add_argument("--max-residual", dest="max_residual", type=float)

    sp = sub.add_parser("fit", help="fit a pair potential to a trajectory")
    common(sp)
    sp.add_argument("--trajectory")
    sp.add_argument("--basis", help="comma-separated: logr, r2, rpow:p, coulomb, const")

    sp = sub.add_parser("validate", help="validate a configuration")
    curve_opts(sp)
    common(sp)
    sp.add_argument("--for", dest="target", choices=[c for c in COMMANDS if c != "validate"],
                    help="command whose requirements to check")
    for name in ("q3", "potential", "trajectory", "basis"):
        sp.add_argument(f"--{name}")
    sp.add_argument("--u", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--N", type=int)
    sp.add_argument("--c", type=float)
    sp.add_argument("--E", type=float)
    return p


def config_from_args(argv=None) -> RunConfig:
    args = _parser().parse_args(argv)
    params = {}
    if getattr(args, "config", None):
        try:
            params.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from exc
    for key, value in vars(args).items():
        if key in ("command", "config", "target") or value is None:
            continue
        params[key] = value
    command = args.command
    if command == "validate" and getattr(args, "target", None):
        return _ValidateFor(args.target, params)
    return RunConfig(command, params)


class _ValidateFor(RunConfig):
    """Validate the requirements of another command."""

    def __init__(self, target: str, params: dict):
        super().__init__(target, params)


def main(argv=None) -> int:
    try:
        config = config_from_args(argv)
        if isinstance(config, _ValidateFor):
            report = validate(config)
            sys.stdout.write(io.dumps(report.to_dict()))
            return 0 if report.ok else EXIT_INVALID
        return run(config)
    except ChoreoError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return exc.exit_code
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error [cli.ConfigError]: {exc}\n")
        return ConfigError.exit_code


if __name__ == "__main__":
    sys.exit(main())
