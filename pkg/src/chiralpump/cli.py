"""Simulate enantio-conversion of chiral molecules by selective optical pumping.

Exit codes: 0 ok, 2 config error, 3 physics/validation error,
4 degenerate steady state.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import PRESET_NAMES, load_raw, load_scenario
from .dynamics import evolve_master, evolve_unitary
from .errors import ConfigError, DegenerateSteadyStateError, PhysicsError
from .hilbert import basis, racemic_state
from .lindblad import RATE_NAMES
from .model import TWO_PI, build_hamiltonian, check_selective_condition, frohlich_nakajima_transform
from .steadystate import steady_state
from .sweep import SWEEP_PRESETS, run_sweep, spec_from_raw

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_DEGENERATE = 0, 2, 3, 4

POPULATION_COLUMNS = {"G_L": "P_1L", "G_R": "P_1R", "M_L": "P_2L", "M_R": "P_2R", "E": "P_3", "X_L": "P_4L", "X_R": "P_4R"}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _mhz(x: float) -> float:
    """Angular rad/us back to linear MHz, rounded to 12 significant digits."""
    return float(_fmt(x / TWO_PI)) + 0.0


def _model_summary(p) -> dict:
    return {
        "delta_MHz": _mhz(p.delta),
        "omega21_MHz": _mhz(p.omega21),
        "omega32_MHz": _mhz(p.omega32),
        "omega31_MHz": _mhz(p.omega31),
        "phi_rad": p.phi,
        "extended": p.extended,
    }


def _rates_summary(d) -> dict:
    return {f"{name}_MHz": _mhz(getattr(d, name)) for name in RATE_NAMES}


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_evolve(args) -> int:
    start = time.perf_counter()
    sc = load_scenario(args.preset, args.config, args.set)
    dim = sc.model.dim
    h = build_hamiltonian(sc.model)
    rho0 = racemic_state(dim)
    unitary = args.no_decoherence or not sc.has_decoherence
    if unitary:
        series = evolve_unitary(rho0, h, sc.grid)
    else:
        series = evolve_master(rho0, h, sc.decoherence, sc.grid)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    labels = basis(dim)
    with open(out / "timeseries.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t_us", *(POPULATION_COLUMNS[s.name] for s in labels), "epsilon", "trace_drift", "min_eig"])
        for i, t in enumerate(series.times):
            writer.writerow(
                [_fmt(t)]
                + [_fmt(series.populations[s][i]) for s in labels]
                + [_fmt(series.epsilon[i]), _fmt(series.trace_drift[i]), _fmt(series.min_eigenvalue[i])]
            )

    final_eps = float(series.epsilon[-1])
    summary = {
        "final_epsilon": None if np.isnan(final_eps) else final_eps,
        "time_to_epsilon_0.99_us": series.time_to_excess(0.99),
        "final_populations": {POPULATION_COLUMNS[s.name]: float(series.populations[s][-1]) for s in labels},
        "diagnostics": {
            "max_trace_drift": float(np.max(series.trace_drift)),
            "max_hermiticity_drift": float(np.max(series.hermiticity_drift)),
            "min_eigenvalue": float(np.min(series.min_eigenvalue)),
        },
        "unitary": unitary,
        "model": _model_summary(sc.model),
        "decoherence": _rates_summary(sc.decoherence),
        "grid": {"t_start_us": sc.grid.t_start, "t_end_us": sc.grid.t_end, "dt_us": sc.grid.dt},
        "meta": {
            "package": "chiralpump",
            "version": __version__,
            "preset": args.preset,
            "config": str(args.config) if args.config else None,
            "elapsed_s": round(time.perf_counter() - start, 3),
        },
    }
    _write_json(out / "summary.json", summary)
    print(f"final epsilon = {_fmt(final_eps)}  ({out / 'timeseries.csv'})")
    return EXIT_OK


def cmd_steady(args) -> int:
    sc = load_scenario(args.preset, args.config, args.set)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {"model": _model_summary(sc.model), "decoherence": _rates_summary(sc.decoherence)}
    try:
        ss = steady_state(build_hamiltonian(sc.model), sc.decoherence)
    except DegenerateSteadyStateError as exc:
        payload.update(degenerate=True, nullity=exc.nullity, error=str(exc))
        _write_json(out / "steady.json", payload)
        print(f"degenerate steady state: null space dimension {exc.nullity}", file=sys.stderr)
        return EXIT_DEGENERATE
    labels = basis(sc.model.dim)
    payload.update(
        degenerate=False,
        nullity=ss.nullity,
        epsilon=ss.epsilon,
        residual=ss.residual,
        populations={POPULATION_COLUMNS[s.name]: float(ss.rho[i, i].real) for i, s in enumerate(labels)},
        rho_real=[[float(x) for x in row] for row in ss.rho.real],
        rho_imag=[[float(x) for x in row] for row in ss.rho.imag],
        basis=[s.value for s in labels],
    )
    _write_json(out / "steady.json", payload)
    print(f"steady-state epsilon = {_fmt(ss.epsilon)}  residual = {ss.residual:.3e}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.preset is not None and args.preset not in SWEEP_PRESETS:
        raise ConfigError(f"unknown sweep preset {args.preset!r}; choose from {', '.join(SWEEP_PRESETS)}")
    if args.preset is None and args.config is None:
        raise ConfigError("sweep needs --preset or --config")
    spec = spec_from_raw(load_raw(args.preset, args.config, args.set))
    table = run_sweep(spec, workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(table.to_csv(), encoding="utf-8")
    failed = sum(1 for row in table.results for r in row if r.error)
    print(f"{len(table.grid)} points x {len(table.families)} families, {failed} failed  ({out / 'sweep.csv'})")
    return EXIT_OK


def _complex_mhz(z: complex) -> str:
    re, im = _mhz(z.real), _mhz(z.imag)
    return _fmt(re) if im == 0 else f"{_fmt(re)}{im:+.12g}j"


def cmd_report(args) -> int:
    sc = load_scenario(args.preset, args.config, args.set)
    p, d = sc.model, sc.decoherence
    lines = ["model (MHz; angular value = 2pi x listed value):"]
    for key, value in _model_summary(p).items():
        lines.append(f"  {key:<16} = {_fmt(value) if not isinstance(value, bool) else value}")
    lines.append("decoherence (MHz):")
    for key, value in _rates_summary(d).items():
        lines.append(f"  {key:<18} = {_fmt(value)}")
    eff = frohlich_nakajima_transform(p)
    lines += [
        "effective parameters (MHz):",
        f"  Lambda        = {_fmt(_mhz(eff.lam))}",
        f"  Lambda_tilde  = {_fmt(_mhz(eff.lam_tilde))}",
        f"  Delta_tilde   = {_fmt(_mhz(eff.delta_tilde))}",
        f"  Omega_tilde_L = {_complex_mhz(eff.omega_tilde_L)}",
        f"  Omega_tilde_R = {_complex_mhz(eff.omega_tilde_R)}",
    ]
    rep = check_selective_condition(p)
    lines += [
        "regime:",
        f"  large detuning ok         = {rep.large_detuning_ok}",
        f"  |delta|/omega32           = {_fmt(rep.detuning_ratio_32)}",
        f"  |delta|/omega21           = {_fmt(rep.detuning_ratio_21)}",
        f"  omega21/omega31           = {_fmt(rep.coupling_ratio)}",
        f"  phase residual (rad)      = {_fmt(rep.phase_residual)}",
        f"  coupling residual (MHz)   = {_fmt(_mhz(rep.coupling_residual))}",
    ]
    for w in rep.rwa_warnings:
        lines.append(f"WARNING: {w}")
    print("\n".join(lines))
    return EXIT_OK


def _common(sub, out_default=None):
    sub.add_argument("--preset", help=f"one of {', '.join(PRESET_NAMES)}")
    sub.add_argument("--config", type=Path, help="INI-style config with [model], [decoherence], [grid], [sweep]")
    sub.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config value")
    if out_default is not None:
        sub.add_argument("--out", default=out_default, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiralpump", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("evolve", help="time-evolve the racemic state")
    _common(p, "out")
    p.add_argument("--no-decoherence", action="store_true", help="unitary evolution only")
    p.set_defaults(func=cmd_evolve)

    p = subs.add_parser("steady", help="solve for the steady state")
    _common(p, "out")
    p.set_defaults(func=cmd_steady)

    p = subs.add_parser("sweep", help="steady-state parameter sweep")
    _common(p, "out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("report", help="print regime report and effective parameters")
    _common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateSteadyStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PhysicsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
