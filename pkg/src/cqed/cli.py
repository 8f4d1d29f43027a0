"""Deterministic command-line front end.

Every subcommand runs one experiment from the physics modules and writes a
single table, either CSV (default) or JSON.  CSV files start with
``# key=value`` metadata lines (command, parameters, seed, version), then a
header row; floats carry 12 significant digits.  Output is written to a
temporary file and atomically renamed, so a failing run never leaves a
partial file behind.

Exit codes: 0 success, 2 invalid arguments (including violated parameter
preconditions), 3 numerical failure (non-convergence, inadequate
truncation, failed fits) with the error name on stderr.

Identical command line + seed -> byte-identical output file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .chargebox import charge_dispersion, spectrum_sweep
from .decoherence import (
    NoiseModel,
    RngSpec,
    bell_state,
    joint_table,
    ramsey_ensemble,
    t1_curves,
    OUTCOME_LABELS,
)
from .errors import CqedError, NumericalError
from .fock import FockBasis, coherent_ket, ladder_suite, quad_stats
from .jaynescummings import JCParams, JCSpace, transfer_time, vacuum_rabi
from .junction import (
    TwoIslandState,
    first_minimum,
    flux_qubit_potential,
    squid_effective,
    two_island_dynamics,
    washboard_u,
)
from .linalg import evolve, fidelity
from .qubit import rabi_trace, ramsey_trace

__all__ = ["main", "OutputTable", "run_command"]


class UsageError(Exception):
    """Invalid parameter combination detected before any computation."""


@dataclass
class OutputTable:
    """One experiment's tabular result plus its provenance metadata."""

    command: str
    params: dict
    seed: int
    columns: list[str]
    rows: list[list]
    summary: str = ""
    extra_metadata: dict = field(default_factory=dict)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def write_table(table: OutputTable, path: str, fmt: str) -> None:
    """Serialize atomically: write to a sibling temp file, then rename."""
    if fmt == "csv":
        lines = [f"# command={table.command}"]
        for key, value in table.params.items():
            lines.append(f"# {key}={_fmt(value)}")
        lines.append(f"# seed={table.seed}")
        lines.append(f"# version={__version__}")
        for key, value in table.extra_metadata.items():
            lines.append(f"# {key}={_fmt(value)}")
        lines.append(",".join(table.columns))
        for row in table.rows:
            lines.append(",".join(_fmt(v) for v in row))
        payload = "\n".join(lines) + "\n"
    elif fmt == "json":
        doc = {
            "command": table.command,
            "params": {k: _json_value(v) for k, v in table.params.items()},
            "seed": table.seed,
            "version": __version__,
            "metadata": {k: _json_value(v) for k, v in table.extra_metadata.items()},
            "columns": table.columns,
            "rows": [[_json_value(v) for v in row] for row in table.rows],
        }
        payload = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        raise UsageError(f"unknown format {fmt!r}")
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def _time_grid(t_max: float, steps: int) -> np.ndarray:
    if t_max <= 0 or steps < 2:
        raise UsageError("need t-max > 0 and steps >= 2")
    return np.linspace(0.0, t_max, steps)


# --- command runners -------------------------------------------------------


def _run_spectrum(args) -> OutputTable:
    if args.ng_steps < 2 or args.levels < 1:
        raise UsageError("need ng-steps >= 2 and levels >= 1")
    if args.levels > 2 * args.ncut - 1:
        raise UsageError("levels exceeds the clean part of the truncated spectrum")
    grid = np.linspace(args.ng_min, args.ng_max, args.ng_steps)
    sweep = spectrum_sweep(args.ec, args.ej, grid, args.ncut, args.levels)
    columns = ["ng"] + [f"e{k}" for k in range(args.levels)]
    rows = [[g, *level_row] for g, level_row in zip(grid, sweep.levels)]
    if args.levels >= 2:
        columns.append("gap_01")
        for row, level_row in zip(rows, sweep.levels):
            row.append(level_row[1] - level_row[0])
        min_gap = min(r[-1] for r in rows)
        summary = f"min gap_01 = {min_gap:.6g}"
    else:
        summary = f"{len(rows)} points"
    return OutputTable(
        "spectrum",
        {
            "ec": args.ec, "ej": args.ej, "ng_min": args.ng_min,
            "ng_max": args.ng_max, "ng_steps": args.ng_steps,
            "levels": args.levels, "ncut": args.ncut,
        },
        args.seed, columns, rows, summary,
    )


def _run_rabi(args) -> OutputTable:
    times = _time_grid(args.t_max, args.steps)
    p0, p1 = rabi_trace(args.omega, times)
    rows = [[t, a, b] for t, a, b in zip(times, p0.values, p1.values)]
    return OutputTable(
        "rabi", {"omega": args.omega, "t_max": args.t_max, "steps": args.steps},
        args.seed, ["t", "p0", "p1"], rows, f"{len(rows)} samples",
    )


def _run_ramsey(args) -> OutputTable:
    times = _time_grid(args.t_max, args.steps)
    series = ramsey_trace(args.delta, times)
    rows = [[t, p] for t, p in zip(times, series.values)]
    return OutputTable(
        "ramsey", {"delta": args.delta, "t_max": args.t_max, "steps": args.steps},
        args.seed, ["t", "p_plus"], rows, f"{len(rows)} samples",
    )


def _run_coherent(args) -> OutputTable:
    alpha = complex(args.alpha_re, args.alpha_im)
    basis = FockBasis(args.dim)
    times = _time_grid(args.t_max, args.steps)
    number = ladder_suite(basis).number
    psi0 = coherent_ket(alpha, basis)
    rows = []
    for t in times:
        alpha_t = alpha * np.exp(1j * args.omega0 * t)
        analytic = coherent_ket(alpha_t, basis)
        numeric = evolve(-args.omega0 * number, float(t), psi0)
        stats = quad_stats(numeric, basis)
        rows.append([
            float(t), alpha_t.real, alpha_t.imag,
            stats["mean1"], stats["mean2"], stats["var1"], stats["var2"],
            fidelity(analytic, numeric),
        ])
    return OutputTable(
        "coherent",
        {
            "alpha_re": args.alpha_re, "alpha_im": args.alpha_im,
            "omega0": args.omega0, "dim": args.dim,
            "t_max": args.t_max, "steps": args.steps,
        },
        args.seed,
        ["t", "alpha_re", "alpha_im", "x1_mean", "x2_mean", "x1_var", "x2_var",
         "fidelity"],
        rows, f"<n> = {abs(alpha) ** 2:.6g}",
    )


def _run_washboard(args) -> OutputTable:
    if args.steps < 2:
        raise UsageError("need steps >= 2")
    phis = np.linspace(args.phi_min, args.phi_max, args.steps)
    us = washboard_u(args.bias, phis)
    rows = [[p, u] for p, u in zip(phis, us)]
    extra = {}
    summary = f"{len(rows)} samples"
    if abs(args.bias) <= 1.0:
        phi_min = first_minimum(args.bias)
        extra["first_minimum"] = phi_min
        summary = f"first minimum at phi = {phi_min:.9g}"
    return OutputTable(
        "washboard",
        {"bias": args.bias, "phi_min": args.phi_min, "phi_max": args.phi_max,
         "steps": args.steps},
        args.seed, ["phi", "u"], rows, summary, extra,
    )


def _run_squid(args) -> OutputTable:
    if args.steps < 2:
        raise UsageError("need steps >= 2")
    fluxes = np.linspace(args.phi_min, args.phi_max, args.steps)
    rows = []
    for f in fluxes:
        eff = squid_effective(args.i0, float(f), args.branch)
        rows.append([float(f), eff["critical"], eff["magnitude"]])
    return OutputTable(
        "squid",
        {"i0": args.i0, "phi_min": args.phi_min, "phi_max": args.phi_max,
         "steps": args.steps, "branch": args.branch},
        args.seed, ["phi_ext", "critical", "magnitude"], rows,
        f"{len(rows)} samples",
    )


def _run_fluxwell(args) -> OutputTable:
    if args.steps < 3:
        raise UsageError("need steps >= 3")
    if args.l <= 0 or args.ej <= 0:
        raise UsageError("need positive inductance and Josephson energy")
    phis = np.linspace(args.phi_min, args.phi_max, args.steps)
    result = flux_qubit_potential(args.l, args.ej, args.phi_ext, phis)
    rows = [[p, u] for p, u in zip(result["phis"], result["u"])]
    extra = {}
    for k, (pos, val) in enumerate(result["minima"]):
        extra[f"minimum_{k}"] = f"{pos:.12g}:{val:.12g}"
    return OutputTable(
        "fluxwell",
        {"l": args.l, "ej": args.ej, "phi_ext": args.phi_ext,
         "phi_min": args.phi_min, "phi_max": args.phi_max, "steps": args.steps},
        args.seed, ["phi", "u"], rows,
        f"{len(result['minima'])} local minima", extra,
    )


def _run_jc(args) -> OutputTable:
    if args.g <= 0:
        raise UsageError("coupling g must be positive")
    times = _time_grid(args.t_max, args.steps)
    result = vacuum_rabi(JCParams(args.g), times, JCSpace(args.nmax))
    rows = [
        [t, pe, ph]
        for t, pe, ph in zip(
            times, result["p_qubit_excited"].values, result["p_photon"].values
        )
    ]
    return OutputTable(
        "jc", {"g": args.g, "nmax": args.nmax, "t_max": args.t_max,
               "steps": args.steps},
        args.seed, ["t", "p_qubit_excited", "p_photon"], rows,
        f"transfer time pi/2g = {transfer_time(JCParams(args.g)):.9g}",
    )


def _run_decay(args) -> OutputTable:
    if args.t1 <= 0:
        raise UsageError("t1 must be positive")
    times = _time_grid(args.t_max, args.steps)
    mc = None
    if args.trials > 0:
        if args.dt > args.t1 / 100:
            raise UsageError("need dt <= t1/100 for the Monte-Carlo estimator")
        mc = {"dt": args.dt, "trials": args.trials, "rng": RngSpec(args.seed)}
    result = t1_curves(args.t1, times, mc)
    columns = ["t", "p_analytic"]
    rows = [[t, p] for t, p in zip(times, result["analytic"].values)]
    if result["monte_carlo"] is not None:
        columns.append("p_mc")
        for row, p in zip(rows, result["monte_carlo"].values):
            row.append(p)
    return OutputTable(
        "decay",
        {"t1": args.t1, "t_max": args.t_max, "steps": args.steps,
         "trials": args.trials, "dt": args.dt},
        args.seed, columns, rows, f"{len(rows)} samples",
    )


def _run_dephase(args) -> OutputTable:
    if args.sigma2 < 0:
        raise UsageError("sigma2 must be >= 0")
    if args.sigma2 > 0 and args.trials < 1000:
        raise UsageError("need trials >= 1000 for ensemble averaging")
    result = ramsey_ensemble(
        args.delta, NoiseModel(np.sqrt(args.sigma2)), args.dt, args.horizon,
        args.trials, RngSpec(args.seed),
    )
    series = result["p_plus"]
    rows = [[t, p] for t, p in zip(series.times, series.values)]
    extra = {"fitted_freq": result["fitted_freq"]}
    if result["fitted_t2"] is not None:
        extra["fitted_t2"] = result["fitted_t2"]
        summary = f"fitted T2 = {result['fitted_t2']:.6g}"
    else:
        summary = "no damping (sigma = 0)"
    return OutputTable(
        "dephase",
        {"delta": args.delta, "sigma2": args.sigma2, "dt": args.dt,
         "horizon": args.horizon, "trials": args.trials},
        args.seed, ["t", "p_plus"], rows, summary, extra,
    )


def _run_bell(args) -> OutputTable:
    table = joint_table(bell_state(args.state))
    rows = []
    for i, alice in enumerate(OUTCOME_LABELS):
        for j, bob in enumerate(OUTCOME_LABELS):
            rows.append([alice, bob, float(table.probs[i, j])])
    return OutputTable(
        "bell", {"state": args.state}, args.seed,
        ["alice", "bob", "probability"], rows, "36 joint probabilities",
    )


def _transmon_ncut(ratio: float) -> int:
    # Charge support grows like (E_J/E_C)^(1/4); the +4 margin plus the
    # doubled-ncut self-check in charge_dispersion keep the cutoff honest.
    return max(5, int(np.ceil(np.sqrt(ratio))) + 4)


def _run_transmon(args) -> OutputTable:
    ratios = [float(r) for r in args.ratios.split(",") if r]
    if not ratios or any(r <= 0 for r in ratios):
        raise UsageError("ratios must be a comma-separated list of positive numbers")
    rows = []
    for ratio in ratios:
        ncut = args.ncut if args.ncut > 0 else _transmon_ncut(ratio)
        disp = charge_dispersion(args.ec, ratio * args.ec, ncut)
        rows.append([ratio, disp["dispersion"], disp["min_gap"], disp["max_gap"]])
    return OutputTable(
        "transmon", {"ec": args.ec, "ratios": args.ratios, "ncut": args.ncut},
        args.seed, ["ej_over_ec", "dispersion", "min_gap", "max_gap"], rows,
        f"dispersion {rows[0][1]:.4g} -> {rows[-1][1]:.4g}",
    )


def _run_tunnel_ode(args) -> OutputTable:
    if args.dt <= 0 or args.steps < 1:
        raise UsageError("need dt > 0 and steps >= 1")
    if args.n1 <= 0 or args.n2 <= 0:
        raise UsageError("pair numbers must be positive")
    state0 = TwoIslandState(args.n1, args.n2, args.theta1, args.theta2)
    traj = two_island_dynamics(state0, args.e_coupling, args.dt, args.steps)
    stride = max(1, args.steps // args.max_rows)
    rows = []
    for k in range(0, args.steps + 1, stride):
        delta = traj.delta[k]
        rows.append([
            traj.times[k], traj.n1[k], traj.n2[k], delta,
            traj.current.values[k], traj.i0 * np.sin(delta),
        ])
    return OutputTable(
        "tunnel-ode",
        {"n1": args.n1, "n2": args.n2, "theta1": args.theta1,
         "theta2": args.theta2, "e_coupling": args.e_coupling,
         "dt": args.dt, "steps": args.steps},
        args.seed, ["t", "n1", "n2", "delta", "current", "i0_sin_delta"], rows,
        f"I0 = {traj.i0:.6g}",
    )


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqed",
        description="Deterministic circuit-QED sweep generator (CSV/JSON).",
    )
    parser.add_argument("--version", action="version", version=f"cqed {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, runner, help_, params):
        p = sub.add_parser(name, help=help_)
        for flag, kwargs in params:
            p.add_argument(flag, **kwargs)
        p.add_argument("--out", default=None, help="output path (default <command>.<format>)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(runner=runner)
        return p

    f = lambda d: {"type": float, "default": d}
    i = lambda d: {"type": int, "default": d}

    add("spectrum", _run_spectrum, "Charge-qubit levels vs gate charge", [
        ("--ec", f(1.0)), ("--ej", f(0.1)), ("--ng-min", f(0.0)),
        ("--ng-max", f(1.0)), ("--ng-steps", i(201)), ("--levels", i(3)),
        ("--ncut", i(10)),
    ])
    add("rabi", _run_rabi, "Rabi oscillation populations", [
        ("--omega", f(1.0)), ("--t-max", f(12.566370614359172)), ("--steps", i(101)),
    ])
    add("ramsey", _run_ramsey, "Noiseless Ramsey fringe", [
        ("--delta", f(1.0)), ("--t-max", f(12.566370614359172)), ("--steps", i(101)),
    ])
    add("coherent", _run_coherent, "Coherent-state free evolution and quadratures", [
        ("--alpha-re", f(1.5)), ("--alpha-im", f(0.0)), ("--omega0", f(1.0)),
        ("--dim", i(48)), ("--t-max", f(6.283185307179586)), ("--steps", i(61)),
    ])
    add("washboard", _run_washboard, "Tilted washboard potential", [
        ("--bias", f(0.5)), ("--phi-min", f(-3.141592653589793)),
        ("--phi-max", f(9.42477796076938)), ("--steps", i(201)),
    ])
    add("squid", _run_squid, "Split-junction critical current vs applied flux", [
        ("--i0", f(1.0)), ("--phi-min", f(-1.0)), ("--phi-max", f(1.0)),
        ("--steps", i(201)), ("--branch", i(0)),
    ])
    add("fluxwell", _run_fluxwell, "Flux-qubit potential and its minima", [
        ("--l", f(0.5)), ("--ej", f(0.4)), ("--phi-ext", f(0.5)),
        ("--phi-min", f(-1.25)), ("--phi-max", f(1.25)), ("--steps", i(501)),
    ])
    add("jc", _run_jc, "Vacuum Rabi oscillation of a qubit-cavity pair", [
        ("--g", f(1.0)), ("--nmax", i(4)), ("--t-max", f(6.283185307179586)),
        ("--steps", i(101)),
    ])
    add("decay", _run_decay, "T1 decay, analytic and Monte-Carlo", [
        ("--t1", f(1.0)), ("--t-max", f(4.0)), ("--steps", i(81)),
        ("--trials", i(0)), ("--dt", f(0.01)),
    ])
    add("dephase", _run_dephase, "Ramsey ensemble under white frequency noise", [
        ("--delta", f(5.0)), ("--sigma2", f(0.5)), ("--dt", f(0.02)),
        ("--horizon", f(8.0)), ("--trials", i(2000)),
    ])
    add("bell", _run_bell, "Joint outcome table of a Bell state", [
        ("--state", {"choices": ("phi+", "phi-", "psi+", "psi-"), "default": "phi+"}),
    ])
    add("transmon", _run_transmon, "Charge dispersion vs E_J/E_C", [
        ("--ec", f(1.0)), ("--ratios", {"default": "1,2,5,10,20,50"}),
        ("--ncut", i(0)),
    ])
    add("tunnel-ode", _run_tunnel_ode, "Semiclassical two-island tunnelling", [
        ("--n1", f(1.0e6)), ("--n2", f(1.0e6)), ("--theta1", f(0.0)),
        ("--theta2", f(0.7)), ("--e-coupling", f(1.0e-6)), ("--dt", f(1.0e-3)),
        ("--steps", i(10000)), ("--max-rows", i(501)),
    ])
    return parser


def run_command(argv: list[str]) -> int:
    args = build_parser().parse_args(argv)
    out_path = args.out if args.out is not None else f"{args.command}.{args.format}"
    try:
        table = args.runner(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except CqedError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    write_table(table, out_path, args.format)
    print(f"{table.command}: wrote {out_path} ({len(table.rows)} rows); {table.summary}")
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
