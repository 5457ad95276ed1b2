"""Scenario configs: INI-style files, presets and ``key=value`` overrides.

Frequencies are linear (MHz) and converted to rad/us on load; times are in
us and phases in radians. Numeric values accept products of numbers and
the symbols ``gamma0`` (1 MHz) and ``pi``, e.g. ``100*gamma0``.
``omega31 = bind`` ties omega31 to omega32*omega21/delta.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

from .dynamics import DEFAULT_DT, DEFAULT_SAMPLES, TimeGrid
from .errors import ConfigError, PhysicsError
from .lindblad import RATE_NAMES, DecoherenceParams
from .model import ModelParams

SYMBOLS = {"gamma0": 1.0, "pi": math.pi}

KEYS = {
    "model": ("delta", "omega21", "omega32", "omega31", "phi", "extended"),
    "decoherence": RATE_NAMES,
    "grid": ("t_start", "t_end", "dt", "samples"),
    "sweep": ("axis", "start", "stop", "points", "spacing", "family_axis", "families"),
}

DEFAULTS = {
    "model": {
        "delta": "20",
        "omega21": "1",
        "omega32": "1",
        "omega31": "0.05",
        "phi": "0",
        "extended": "false",
    },
    "decoherence": {name: "0" for name in RATE_NAMES},
    "grid": {"t_start": "0", "t_end": "50", "dt": str(DEFAULT_DT), "samples": str(DEFAULT_SAMPLES)},
    "sweep": {},
}

_FIG3_RATES = {"gamma31": "0.1", "gamma32": "0.1", "gamma21": "1", "gamma_dephase": "1"}
_LOG_RATE_AXIS = {"start": "1e-3*gamma0", "stop": "1e2*gamma0", "points": "25", "spacing": "log"}
_DELTA_AXIS = {"axis": "delta", "start": "10", "stop": "200", "points": "25", "spacing": "log"}

PRESETS = {
    # unitary from a rank-2 state: a finer step keeps min eigenvalue above -1e-8
    "fig2": {"grid": {"t_end": "50", "dt": "1.25e-4"}},
    "fig3": {"decoherence": dict(_FIG3_RATES), "grid": {"t_end": "140"}},
    "fig4a": {
        "decoherence": dict(_FIG3_RATES),
        "sweep": {
            "axis": "gamma_uniform",
            **_LOG_RATE_AXIS,
            "family_axis": "gamma_dephase",
            "families": "0.01*gamma0, 0.1*gamma0, 1*gamma0",
        },
    },
    "fig4b": {
        "decoherence": dict(_FIG3_RATES),
        "sweep": {
            "axis": "gamma_dephase",
            **_LOG_RATE_AXIS,
            "family_axis": "gamma_uniform",
            "families": "0.01*gamma0, 0.1*gamma0, 1*gamma0, 10*gamma0",
        },
    },
    "fig5": {
        "model": {"omega31": "bind"},
        "decoherence": {"gamma31": "1", "gamma32": "1", "gamma21": "1", "gamma_dephase": "1*gamma0"},
        "sweep": {
            **_DELTA_AXIS,
            "family_axis": "gamma_uniform",
            "families": "1*gamma0, 10*gamma0, 100*gamma0",
        },
    },
    "fig6a": {
        "model": {"omega31": "bind", "extended": "true"},
        "decoherence": {**_FIG3_RATES, "gamma34": "1*gamma0", "gamma41": "1e-5"},
        "sweep": {
            "axis": "gamma34",
            **_LOG_RATE_AXIS,
            "family_axis": "delta",
            "families": "20, 50, 100",
        },
    },
    "fig6b": {
        "model": {"omega31": "bind", "extended": "true"},
        "decoherence": {**_FIG3_RATES, "gamma34": "1*gamma0", "gamma41": "1e-5"},
        "sweep": {
            **_DELTA_AXIS,
            "family_axis": "gamma34",
            "families": "0.1*gamma0, 1*gamma0, 10*gamma0",
        },
    },
}

PRESET_NAMES = tuple(PRESETS)


def parse_number(text: str) -> float:
    """Evaluate a product such as ``2*pi``, ``1e-5`` or ``100*gamma0``."""
    text = str(text).strip()
    if not text:
        raise ConfigError("empty numeric value")
    value = 1.0
    for factor in text.split("*"):
        factor = factor.strip()
        sign = 1.0
        if factor.startswith("-"):
            sign, factor = -1.0, factor[1:].strip()
        if factor in SYMBOLS:
            value *= sign * SYMBOLS[factor]
            continue
        try:
            value *= sign * float(factor)
        except ValueError:
            raise ConfigError(f"cannot parse numeric value {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"non-finite value {text!r}")
    return value


def parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"cannot parse boolean {text!r}")


def _merge(base, layer):
    for section, values in layer.items():
        if section not in KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key, value in values.items():
            if key not in KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            base[section][key] = str(value)


def _resolve_key(key: str) -> tuple[str, str]:
    if "." in key:
        section, name = key.split(".", 1)
        if section not in KEYS or name not in KEYS[section]:
            raise ConfigError(f"unknown override key {key!r}")
        return section, name
    owners = [s for s, names in KEYS.items() if key in names]
    if len(owners) != 1:
        raise ConfigError(f"unknown override key {key!r}")
    return owners[0], key


def load_raw(preset: str | None = None, path: str | Path | None = None, overrides=()) -> dict:
    """Layer defaults, preset, config file and overrides into a section dict."""
    raw = {section: dict(values) for section, values in DEFAULTS.items()}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(PRESET_NAMES)}")
        _merge(raw, PRESETS[preset])
    if path is not None:
        parser = configparser.ConfigParser()
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        _merge(raw, {s: dict(parser[s]) for s in parser.sections()})
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        section, name = _resolve_key(key.strip())
        raw[section][name] = value.strip()
    return raw


@dataclass(frozen=True)
class Scenario:
    model: ModelParams
    decoherence: DecoherenceParams
    grid: TimeGrid
    bind_omega31: bool
    raw: dict

    @property
    def has_decoherence(self) -> bool:
        return self.decoherence.any_positive(self.model.dim)


def build_model(section: dict) -> tuple[ModelParams, bool]:
    bind = section["omega31"].strip().lower() == "bind"
    delta = parse_number(section["delta"])
    omega21 = parse_number(section["omega21"])
    omega32 = parse_number(section["omega32"])
    if bind:
        if delta <= 0:
            raise PhysicsError("omega31 = bind needs delta > 0")
        omega31 = omega32 * omega21 / delta
    else:
        omega31 = parse_number(section["omega31"])
    p = ModelParams.from_mhz(
        delta=delta,
        omega21=omega21,
        omega32=omega32,
        omega31=omega31,
        phi=parse_number(section["phi"]),
        extended=parse_bool(section["extended"]),
    )
    return (p.bound() if bind else p), bind


def build_decoherence(section: dict) -> DecoherenceParams:
    return DecoherenceParams.from_mhz(**{k: parse_number(v) for k, v in section.items()})


def build_grid(section: dict) -> TimeGrid:
    samples = parse_number(section["samples"])
    if samples != int(samples):
        raise ConfigError("samples must be an integer")
    return TimeGrid(
        t_start=parse_number(section["t_start"]),
        t_end=parse_number(section["t_end"]),
        dt=parse_number(section["dt"]),
        samples=int(samples),
    )


def load_scenario(preset=None, path=None, overrides=()) -> Scenario:
    raw = load_raw(preset, path, overrides)
    model, bind = build_model(raw["model"])
    return Scenario(model, build_decoherence(raw["decoherence"]), build_grid(raw["grid"]), bind, raw)
