"""Command-line front end: curve export, cross-checks, trajectory dumps.

Three subcommands:

* ``curve``: evaluate a click-probability curve over a range of atom
  numbers N and write CSV or JSON.  Presets ``fig1``, ``fig2`` and
  ``fig4`` emit the standard multi-series parameter sets, one output
  file per series.
* ``check``: compare the closed forms, the step-wise state machine,
  the RK4 integrator and the Monte Carlo sampler against each other
  and write a machine-readable pass/fail report.
* ``trajectories``: sample individual click records and write JSONL.

Settings are resolved in precedence order: built-in defaults, then the
``--config`` JSON file, then explicit flags.  Preset parameter values
override config values; combining a preset with a flag it fixes is an
error.

Exit codes: 0 success, 1 validation error, 2 tolerance failure,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .core import DensityMatrix, SystemParams
from .dynamics import evolve_coupled_lossy, pi_pulse_lossy, tau_pi
from .lindblad import (
    coupled_cavities_generator,
    default_step,
    integrate,
    jaynes_cummings_generator,
)
from .montecarlo import SeededSampler, estimate, sample_trajectory
from .protocols import (
    CurveSource,
    ProtocolKind,
    closed_form_probability,
    run_protocol,
    sweep_curve,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2
EXIT_IO = 3

_SOURCES = ("closed-form", "state-machine", "monte-carlo", "all")
_FORMATS = ("csv", "json", "jsonl")

# keys the config file may set; rk4_sets and omega have no flag
_CONFIG_KEYS = {
    "kind", "g", "k", "omega", "omega0", "t0", "p_g", "p_e",
    "n", "n_max", "runs", "seed", "source", "out", "format",
    "preset", "rk4_sets",
}

_DEFAULTS = {
    "g": 1.0e3,
    "k": 0.0,
    "omega": 0.0,
    "omega0": 1.0e5,
    "t0": None,
    "p_g": 1.0,
    "p_e": 1.0,
    "seed": 0,
}


class UsageError(Exception):
    """Configuration problem the user can fix; exits with code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which collides with the
    # tolerance-failure code; route those to the validation code instead
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file with the same keys as the flags")
    sub.add_argument("--kind", help="protocol kind, e.g. perfect-detectors")
    sub.add_argument("--g", type=float, help="cavity-cavity coupling in rad/s")
    sub.add_argument("--k", type=float, help="cavity decay rate in 1/s")
    sub.add_argument("--omega0", type=float, help="atom-cavity Rabi frequency in rad/s")
    sub.add_argument("--t0", type=float, help="total exchange time in s (default pi/2g)")
    sub.add_argument("--p-g", type=float, help="ground-state detector efficiency")
    sub.add_argument("--p-e", type=float, help="excited-state detector efficiency")
    sub.add_argument("--runs", type=int, help="Monte Carlo run count")
    sub.add_argument("--seed", type=int, help="Monte Carlo seed")
    sub.add_argument("--out", help="output path")
    sub.add_argument("--format", choices=_FORMATS, help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zenocav", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    curve = commands.add_parser("curve", help="evaluate click-probability curves over N")
    _add_common(curve)
    curve.add_argument("--preset", choices=("fig1", "fig2", "fig4"))
    curve.add_argument("--n", type=int, nargs="+", help="explicit list of atom numbers")
    curve.add_argument("--n-max", type=int, help="use N = 1..n_max")
    curve.add_argument("--source", choices=_SOURCES)
    curve.set_defaults(func=cmd_curve)

    check = commands.add_parser("check", help="cross-validate all computation paths")
    _add_common(check)
    check.add_argument("--n-max", type=int, help="state-machine comparison covers N = 1..n_max")
    check.set_defaults(func=cmd_check)

    traj = commands.add_parser("trajectories", help="sample click records to JSONL")
    _add_common(traj)
    traj.add_argument("--n", type=int, help="number of probe atoms per run")
    traj.set_defaults(func=cmd_trajectories)

    return parser


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must be a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _merge_settings(args: argparse.Namespace, extra_defaults: dict) -> dict:
    settings = dict(_DEFAULTS)
    settings.update(extra_defaults)
    if getattr(args, "config", None):
        settings.update(_load_config(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _parse_kind(value) -> ProtocolKind:
    try:
        return ProtocolKind(value)
    except ValueError:
        valid = ", ".join(k.value for k in ProtocolKind)
        raise UsageError(f"unknown kind {value!r}; expected one of: {valid}") from None


def _build_params(settings: dict, n_atoms: int = 1) -> SystemParams:
    try:
        return SystemParams(
            g=float(settings["g"]),
            omega=float(settings["omega"]),
            k=float(settings["k"]),
            omega0=float(settings["omega0"]),
            p_g=float(settings["p_g"]),
            p_e=float(settings["p_e"]),
            t0=None if settings["t0"] is None else float(settings["t0"]),
            n_atoms=n_atoms,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _num_token(value: float) -> str:
    """Compact number form for filename suffixes: 0.9 -> 0p9, 10.0 -> 10."""
    if float(value) == int(value):
        return str(int(value))
    return repr(float(value)).replace(".", "p")


_PRESETS = {
    # name: (fixed settings, swept key, swept values, default n_max)
    "fig1": ({"kind": "only-dg-inefficient", "g": 1.0e3}, "p_g", (1.0, 0.9, 0.5), 100),
    "fig2": ({"kind": "only-de-noclick", "g": 1.0e3}, "p_e", (1.0, 0.8, 0.5), 100),
    "fig4": (
        {"kind": "no-intermediate-lossy", "g": 1.0e3, "omega0": 1.0e5, "p_e": 1.0},
        "k",
        (1.0e3, 10.0),
        400,
    ),
}

_SUFFIX_KEY = {"p_g": "pg", "p_e": "pe", "k": "k"}


def _preset_series(name: str, args: argparse.Namespace, settings: dict):
    """Expand a preset into (suffix, settings) pairs, one per series."""
    fixed, swept_key, swept_values, n_max = _PRESETS[name]
    for key in list(fixed) + [swept_key]:
        if getattr(args, key, None) is not None:
            flag = "--" + key.replace("_", "-")
            raise UsageError(f"preset {name} fixes {flag}; remove the flag")
    if settings.get("n") is None and settings.get("n_max") is None:
        settings["n_max"] = n_max
    series = []
    for value in swept_values:
        entry = dict(settings)
        entry.update(fixed)
        entry[swept_key] = value
        suffix = f"_{_SUFFIX_KEY[swept_key]}{_num_token(value)}"
        series.append((suffix, entry))
    return series


def _resolve_n_values(settings: dict) -> list:
    if settings.get("n") is not None:
        values = settings["n"]
        if isinstance(values, int):
            values = [values]
        values = [int(v) for v in values]
        if not values or any(v < 1 for v in values):
            raise UsageError("--n values must be positive integers")
        return values
    raw = settings.get("n_max")
    n_max = 100 if raw is None else int(raw)
    if n_max < 1:
        raise UsageError("--n-max must be a positive integer")
    return list(range(1, n_max + 1))


def _echo_lines(command: str, settings: dict, params: SystemParams, sources) -> list:
    lines = [
        f"# zenocav {command}",
        f"# kind = {settings['kind']}",
        f"# source = {','.join(s.value for s in sources)}",
        f"# g = {params.g!r}",
        f"# k = {params.k!r}",
        f"# omega = {params.omega!r}",
        f"# omega0 = {params.omega0!r}",
        f"# t0 = {params.t0!r}",
        f"# p_g = {params.p_g!r}",
        f"# p_e = {params.p_e!r}",
        f"# seed = {settings['seed']}",
    ]
    if CurveSource.MONTE_CARLO in sources:
        lines.append(f"# runs = {settings['runs']}")
    return lines


def cmd_curve(args: argparse.Namespace) -> int:
    settings = _merge_settings(args, {"source": "closed-form", "runs": 100_000, "format": "csv"})
    fmt = settings["format"]
    if fmt not in ("csv", "json"):
        raise UsageError("curve supports --format csv or json")

    preset = settings.get("preset")
    if preset:
        if preset not in _PRESETS:
            raise UsageError(f"unknown preset {preset!r}")
        series = _preset_series(preset, args, settings)
    else:
        if settings.get("kind") is None:
            raise UsageError("--kind is required without --preset")
        series = [("", settings)]

    source_name = settings["source"]
    if source_name == "all":
        sources = [CurveSource.CLOSED_FORM, CurveSource.STATE_MACHINE, CurveSource.MONTE_CARLO]
    else:
        try:
            sources = [CurveSource(source_name)]
        except ValueError:
            raise UsageError(f"unknown source {source_name!r}") from None

    out = Path(settings.get("out") or f"curve.{fmt}")
    written = []
    for suffix, entry in series:
        kind = _parse_kind(entry["kind"])
        params = _build_params(entry)
        n_values = _resolve_n_values(entry)
        swept = {
            src: sweep_curve(
                params, kind, n_values, src,
                n_runs=int(entry["runs"]), seed=int(entry["seed"]),
            )
            for src in sources
        }
        path = out if not suffix else out.with_name(out.stem + suffix + out.suffix)
        if fmt == "csv":
            lines = _echo_lines("curve", entry, params, sources)
            lines.append("N,source,value,std_error")
            for i, n in enumerate(n_values):
                for src in sources:
                    point = swept[src].points[i]
                    err = "" if point.std_error is None else repr(point.std_error)
                    lines.append(f"{n},{src.value},{point.value!r},{err}")
            path.write_text("\n".join(lines) + "\n")
        else:
            doc = {
                "command": "curve",
                "kind": kind.value,
                "params": {
                    "g": params.g, "k": params.k, "omega": params.omega,
                    "omega0": params.omega0, "t0": params.t0,
                    "p_g": params.p_g, "p_e": params.p_e,
                },
                "seed": int(entry["seed"]),
                "runs": int(entry["runs"]) if CurveSource.MONTE_CARLO in sources else None,
                "points": [
                    {
                        "n": point.n,
                        "source": src.value,
                        "value": point.value,
                        "std_error": point.std_error,
                    }
                    for i in range(len(n_values))
                    for src in sources
                    for point in [swept[src].points[i]]
                ],
            }
            path.write_text(json.dumps(doc, indent=2) + "\n")
        written.append(str(path))
    print("\n".join(f"wrote {p}" for p in written))
    return EXIT_OK


# deterministic parameter sets for the RK4 comparison: (g, k, omega0, omega)
_RK4_SETS = (
    (1.0e3, 0.0, 1.0e5, 0.0),
    (1.0e3, 10.0, 1.0e5, 0.0),
    (1.0e3, 100.0, 1.0e4, 0.0),
    (500.0, 50.0, 2.0e4, 2.0e3),
    (1.0e3, 1.0e3, 1.0e5, 0.0),
)


def _check_state_vector() -> DensityMatrix:
    amps = np.array([0.6, 0.48j, 0.4, -0.5j])
    amps = amps / np.linalg.norm(amps)
    return DensityMatrix(np.outer(amps, amps.conj()))


def _check_closed_vs_state(settings: dict, n_max: int) -> dict:
    worst = 0.0
    worst_cell = None
    for kind in ProtocolKind:
        entry = dict(settings)
        if kind != ProtocolKind.NO_INTERMEDIATE_LOSSY:
            entry["k"] = 0.0
        for n in range(1, n_max + 1):
            params = replace(_build_params(entry), n_atoms=n)
            closed = closed_form_probability(params, kind)
            run = run_protocol(params, kind)
            dev = abs(closed - run.probability)
            if dev > worst:
                worst, worst_cell = dev, {"kind": kind.value, "n": n}
    return {
        "passed": bool(worst <= 1e-10),
        "tolerance": 1e-10,
        "n_max": n_max,
        "max_deviation": worst,
        "worst_cell": worst_cell,
    }


def _check_rk4(settings: dict) -> dict:
    sets = settings.get("rk4_sets") or _RK4_SETS
    rho = _check_state_vector()
    results = []
    worst = 0.0
    for values in sets:
        g, k, omega0 = (float(v) for v in values[:3])
        omega = float(values[3]) if len(values) > 3 else 0.0
        params = SystemParams(g=g, k=k, omega0=omega0, omega=omega)
        dt = default_step(params)
        t = 1.1 / g
        exact = evolve_coupled_lossy(rho, params, t)
        numeric = integrate(coupled_cavities_generator(params), rho, t, dt)
        exchange_dev = float(np.max(np.abs(exact.mat - numeric.mat)))
        pulse_exact = pi_pulse_lossy(rho, params)
        pulse_numeric = integrate(
            jaynes_cummings_generator(params), rho, tau_pi(omega0, k), dt
        )
        pulse_dev = float(np.max(np.abs(pulse_exact.mat - pulse_numeric.mat)))
        worst = max(worst, exchange_dev, pulse_dev)
        results.append({
            "g": g, "k": k, "omega0": omega0, "omega": omega,
            "exchange_deviation": exchange_dev,
            "pulse_deviation": pulse_dev,
        })
    return {
        "passed": bool(worst <= 1e-7),
        "tolerance": 1e-7,
        "max_deviation": worst,
        "sets": results,
    }


def _check_convergence() -> dict:
    params = SystemParams(g=1.0e3, k=50.0, omega0=1.0e5)
    rho = _check_state_vector()
    t = 1.1 / params.g
    exact = evolve_coupled_lossy(rho, params, t)
    generator = coupled_cavities_generator(params)

    def err(n_steps: int) -> float:
        numeric = integrate(generator, rho, t, t / n_steps)
        return float(np.max(np.abs(exact.mat - numeric.mat)))

    coarse, fine = err(24), err(48)
    order = math.log2(coarse / fine)
    return {
        "passed": bool(3.7 <= order <= 4.3),
        "bounds": [3.7, 4.3],
        "order": order,
        "coarse_error": coarse,
        "fine_error": fine,
    }


def _check_monte_carlo(settings: dict) -> dict:
    runs = int(settings["runs"])
    seed = int(settings["seed"])
    cells = []
    n_within = 0
    for kind in ProtocolKind:
        entry = dict(settings)
        if kind != ProtocolKind.NO_INTERMEDIATE_LOSSY:
            entry["k"] = 0.0
        for n in (1, 2, 5, 10):
            params = replace(_build_params(entry), n_atoms=n)
            exact = closed_form_probability(params, kind)
            mc = estimate(params, kind, n_runs=runs, seed=seed)
            sigma = math.sqrt(exact * (1.0 - exact) / runs)
            within = abs(mc.value - exact) <= 3.0 * sigma + 1e-12
            n_within += within
            cells.append({
                "kind": kind.value,
                "n": n,
                "exact": exact,
                "monte_carlo": mc.value,
                "sigma": sigma,
                "within_3_sigma": bool(within),
            })
    fraction = n_within / len(cells)
    return {
        "passed": bool(fraction >= 0.95),
        "runs": runs,
        "within_fraction": fraction,
        "cells": cells,
    }


def cmd_check(args: argparse.Namespace) -> int:
    settings = _merge_settings(
        args, {"kind": None, "p_g": 0.9, "p_e": 0.8, "k": 10.0, "runs": 20_000, "format": "json"}
    )
    if settings["format"] != "json":
        raise UsageError("check supports --format json only")
    raw = settings.get("n_max")
    n_max = 25 if raw is None else int(raw)
    if n_max < 1:
        raise UsageError("--n-max must be a positive integer")

    sections = {
        "closed_form_vs_state_machine": _check_closed_vs_state(settings, n_max),
        "lossy_vs_rk4": _check_rk4(settings),
        "rk4_convergence": _check_convergence(),
        "monte_carlo": _check_monte_carlo(settings),
    }
    passed = all(section["passed"] for section in sections.values())
    report = {
        "command": "check",
        "passed": passed,
        "seed": int(settings["seed"]),
        "sections": sections,
    }
    out = Path(settings.get("out") or "check.json")
    out.write_text(json.dumps(report, indent=2) + "\n")
    for name, section in sections.items():
        print(f"{name}: {'pass' if section['passed'] else 'FAIL'}")
    print(f"wrote {out}")
    return EXIT_OK if passed else EXIT_TOLERANCE


def cmd_trajectories(args: argparse.Namespace) -> int:
    settings = _merge_settings(args, {"runs": 1000, "format": "jsonl", "n": 10})
    if settings["format"] != "jsonl":
        raise UsageError("trajectories supports --format jsonl only")
    if settings.get("kind") is None:
        raise UsageError("--kind is required for trajectories")
    kind = _parse_kind(settings["kind"])
    n = int(settings["n"])
    if n < 1:
        raise UsageError("--n must be a positive integer")
    params = _build_params(settings, n_atoms=n)
    runs = int(settings["runs"])
    if runs < 1:
        raise UsageError("--runs must be a positive integer")
    seed = int(settings["seed"])

    out = Path(settings.get("out") or "trajectories.jsonl")
    lines = []
    for index in range(runs):
        traj = sample_trajectory(params, kind, SeededSampler(seed, index))
        lines.append(json.dumps({
            "run_index": index,
            "seed": seed,
            "kind": kind.value,
            "n_atoms": n,
            "outcomes": [o.value for o in traj.outcomes],
            "final_outcome": None if traj.final_outcome is None else traj.final_outcome.value,
            "final_label": traj.final_label.value,
            "terminated_early": traj.terminated_early,
        }))
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({runs} records)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
