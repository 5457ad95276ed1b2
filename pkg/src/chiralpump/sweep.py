"""Steady-state parameter sweeps with deterministic tabular output."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import build_decoherence, build_model, load_raw, parse_number
from .errors import ChiralPumpError, ConfigError, ParameterError
from .lindblad import DecoherenceParams
from .model import TWO_PI, ModelParams, build_hamiltonian, check_selective_condition
from .steadystate import steady_state

AXES = ("gamma_uniform", "gamma_dephase", "delta", "gamma34")
RATE_AXES = ("gamma_uniform", "gamma_dephase", "gamma34")
SWEEP_PRESETS = ("fig4a", "fig4b", "fig5", "fig6a", "fig6b")


@dataclass(frozen=True)
class SweepSpec:
    """One curve per family value, one steady state per (grid point, family).

    ``grid`` and ``families`` are linear frequencies in MHz.
    """

    axis: str
    grid: tuple[float, ...]
    family_axis: str
    families: tuple[float, ...]
    bind_omega31: bool
    model: ModelParams
    decoherence: DecoherenceParams

    def __post_init__(self):
        for name in (self.axis, self.family_axis):
            if name not in AXES:
                raise ParameterError(f"unknown sweep axis {name!r}; expected one of {AXES}")
        if self.axis == self.family_axis:
            raise ParameterError("axis and family_axis must differ")
        grid = np.asarray(self.grid, dtype=float)
        if grid.size == 0 or np.any(np.diff(grid) <= 0):
            raise ParameterError("sweep grid must be non-empty and strictly increasing")
        for name, values in ((self.axis, self.grid), (self.family_axis, self.families)):
            if (name in RATE_AXES or (name == "delta" and self.bind_omega31)) and min(values) <= 0:
                raise ParameterError(f"values along {name} must be positive")
        if not self.families:
            raise ParameterError("at least one family value is required")

    def point(self, value: float, family: float) -> tuple[ModelParams, DecoherenceParams]:
        model, dec = _apply(self.model, self.decoherence, self.axis, value)
        model, dec = _apply(model, dec, self.family_axis, family)
        if self.bind_omega31:
            model = model.bound()
        return model, dec


def _apply(model, dec, axis, value_mhz):
    value = TWO_PI * value_mhz
    if axis == "gamma_uniform":
        return model, replace(dec, gamma31=value, gamma32=value, gamma21=value)
    if axis == "gamma_dephase":
        return model, replace(dec, gamma_dephase=value)
    if axis == "gamma34":
        return model, replace(dec, gamma34=value)
    return model.replace(delta=value), dec


@dataclass(frozen=True)
class PointResult:
    epsilon: float
    residual: float
    selective_residual: float
    nullity: int
    error: str = ""


@dataclass(frozen=True)
class SweepTable:
    axis: str
    family_axis: str
    grid: tuple[float, ...]
    families: tuple[float, ...]
    results: tuple[tuple[PointResult, ...], ...]  # [point][family]

    def epsilon(self, family_index: int) -> np.ndarray:
        return np.array([row[family_index].epsilon for row in self.results])

    def header(self) -> list[str]:
        cols = [f"{self.axis}_MHz"]
        for f in self.families:
            tag = f"{self.family_axis}={_fmt(f)}"
            cols += [
                f"epsilon[{tag}]",
                f"residual[{tag}]",
                f"selective_residual[{tag}]",
                f"nullity[{tag}]",
                f"error[{tag}]",
            ]
        return cols

    def rows(self) -> list[list[str]]:
        out = []
        for value, row in zip(self.grid, self.results):
            line = [_fmt(value)]
            for r in row:
                line += [_fmt(r.epsilon), _fmt(r.residual), _fmt(r.selective_residual), str(r.nullity), r.error]
            out.append(line)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        writer.writerows(self.rows())
        return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _solve_point(spec: SweepSpec, value: float, family: float) -> PointResult:
    try:
        model, dec = spec.point(value, family)
        sel = check_selective_condition(model).coupling_residual
        ss = steady_state(build_hamiltonian(model), dec)
        return PointResult(ss.epsilon, ss.residual, sel, ss.nullity)
    except ChiralPumpError as exc:
        nullity = getattr(exc, "nullity", 0)
        return PointResult(float("nan"), float("nan"), float("nan"), nullity, type(exc).__name__ + ": " + str(exc))


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepTable:
    """Evaluate every (grid point, family) pair; errors are recorded per point."""
    tasks = [(v, f) for v in spec.grid for f in spec.families]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(lambda t: _solve_point(spec, *t), tasks))
    else:
        flat = [_solve_point(spec, v, f) for v, f in tasks]
    n = len(spec.families)
    rows = tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(len(spec.grid)))
    return SweepTable(spec.axis, spec.family_axis, tuple(spec.grid), tuple(spec.families), rows)


def make_grid(start: float, stop: float, points: int, spacing: str = "log") -> tuple[float, ...]:
    if points < 1:
        raise ParameterError("points must be >= 1")
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise ParameterError("log spacing needs positive endpoints")
        values = np.logspace(np.log10(start), np.log10(stop), points)
    elif spacing == "linear":
        values = np.linspace(start, stop, points)
    else:
        raise ConfigError(f"unknown spacing {spacing!r}")
    return tuple(float(v) for v in values)


def spec_from_raw(raw: dict) -> SweepSpec:
    section = raw["sweep"]
    missing = [k for k in ("axis", "start", "stop", "points", "family_axis", "families") if k not in section]
    if missing:
        raise ConfigError(f"[sweep] is missing {', '.join(missing)}")
    model, bind = build_model(raw["model"])
    points = parse_number(section["points"])
    if points != int(points):
        raise ConfigError("points must be an integer")
    grid = make_grid(
        parse_number(section["start"]),
        parse_number(section["stop"]),
        int(points),
        section.get("spacing", "log").strip(),
    )
    families = tuple(parse_number(x) for x in section["families"].split(",") if x.strip())
    return SweepSpec(
        axis=section["axis"].strip(),
        grid=grid,
        family_axis=section["family_axis"].strip(),
        families=families,
        bind_omega31=bind,
        model=model,
        decoherence=build_decoherence(raw["decoherence"]),
    )


def preset(name: str) -> SweepSpec:
    if name not in SWEEP_PRESETS:
        raise ConfigError(f"unknown sweep preset {name!r}; choose from {', '.join(SWEEP_PRESETS)}")
    return spec_from_raw(load_raw(name))

