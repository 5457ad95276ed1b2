"""Relaxation, dephasing and leakage terms of the master equation.

Each population-relaxation channel |upper> -> |lower> with rate g
contributes ``g*(A rho A^+ - A^+ A rho) + H.c.`` with ``A = |lower><upper|``,
i.e. ``g*(2 A rho A^+ - A^+ A rho - rho A^+ A)``. The quoted rates are used
as they stand: this is twice the usual ``D[A]`` normalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BasisError, ParameterError
from .hilbert import StateLabel, as_operator, index
from .model import TWO_PI

RATE_NAMES = ("gamma31", "gamma32", "gamma21", "gamma_dephase", "gamma34", "gamma41")


@dataclass(frozen=True)
class DecoherenceParams:
    """Decoherence rates in rad/us. gamma34 and gamma41 only act in 7 levels."""

    gamma31: float = 0.0
    gamma32: float = 0.0
    gamma21: float = 0.0
    gamma_dephase: float = 0.0
    gamma34: float = 0.0
    gamma41: float = 0.0

    def __post_init__(self):
        for name in RATE_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ParameterError(f"{name} must be a finite rate >= 0, got {value}")

    @classmethod
    def from_mhz(cls, **rates):
        return cls(**{k: TWO_PI * v for k, v in rates.items()})

    @property
    def total(self) -> float:
        return sum(getattr(self, name) for name in RATE_NAMES)

    def any_positive(self, dim: int = 7) -> bool:
        names = RATE_NAMES if dim == 7 else RATE_NAMES[:4]
        return any(getattr(self, name) > 0 for name in names)


# (rate name, lower, upper) for every population-relaxation channel.
WORKING_CHANNELS = (
    ("gamma21", StateLabel.G_L, StateLabel.M_L),
    ("gamma21", StateLabel.G_R, StateLabel.M_R),
    ("gamma31", StateLabel.G_L, StateLabel.E),
    ("gamma31", StateLabel.G_R, StateLabel.E),
    ("gamma32", StateLabel.M_L, StateLabel.E),
    ("gamma32", StateLabel.M_R, StateLabel.E),
)
LEAKAGE_CHANNELS = (
    ("gamma34", StateLabel.X_L, StateLabel.E),
    ("gamma34", StateLabel.X_R, StateLabel.E),
    ("gamma41", StateLabel.G_L, StateLabel.X_L),
    ("gamma41", StateLabel.G_R, StateLabel.X_R),
)


def _relax(rho, channels, d):
    dim = rho.shape[0]
    out = np.zeros_like(rho)
    for name, lower, upper in channels:
        g = getattr(d, name)
        if g == 0:
            continue
        lo, up = index(lower, dim), index(upper, dim)
        # A = |lo><up|: A rho A^+ = rho[up, up] |lo><lo|, A^+A = |up><up|
        out[lo, lo] += 2 * g * rho[up, up]
        out[up, :] -= g * rho[up, :]
        out[:, up] -= g * rho[:, up]
    return out


def apply_relaxation(rho, d: DecoherenceParams) -> np.ndarray:
    """Population relaxation among the working states (chirality preserving)."""
    rho = as_operator(rho)
    return _relax(rho, WORKING_CHANNELS, d)


def apply_dephasing(rho, gamma_dephase: float) -> np.ndarray:
    """Damp every off-diagonal entry at ``gamma_dephase``; diagonal untouched."""
    if gamma_dephase < 0:
        raise ParameterError("gamma_dephase must be >= 0")
    rho = as_operator(rho)
    out = -gamma_dephase * rho
    np.fill_diagonal(out, 0)
    return out


def apply_leakage(rho, d: DecoherenceParams) -> np.ndarray:
    """Relaxation |3> -> |4_Q> and |4_Q> -> |1_Q>; needs the 7-level basis."""
    rho = as_operator(rho)
    if rho.shape[0] != 7:
        raise BasisError("leakage channels need the 7-level basis")
    return _relax(rho, LEAKAGE_CHANNELS, d)


def apply_dissipator(rho, d: DecoherenceParams) -> np.ndarray:
    rho = as_operator(rho)
    out = apply_relaxation(rho, d) + apply_dephasing(rho, d.gamma_dephase)
    if rho.shape[0] == 7:
        out += apply_leakage(rho, d)
    return out


def apply_generator(h, d: DecoherenceParams | None, rho) -> np.ndarray:
    """Right-hand side -i[H, rho] + L rho evaluated directly on matrices."""
    h = as_operator(h)
    rho = as_operator(rho, h.shape[0])
    out = -1j * (h @ rho - rho @ h)
    if d is not None:
        out += apply_dissipator(rho, d)
    return out


def vec(rho) -> np.ndarray:
    """Column-major vectorisation."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


@dataclass(frozen=True)
class Liouvillian:
    dim: int
    matrix: np.ndarray

    def apply(self, rho) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.dim)

    def trace_defect(self) -> float:
        """max |vec(I)^+ L|: zero iff the generator preserves the trace."""
        return float(np.max(np.abs(vec(np.eye(self.dim)) @ self.matrix)))


def _jump_superop(dim, g, lower, upper):
    a = np.zeros((dim, dim))
    a[lower, upper] = 1.0
    ada = a.T @ a
    eye = np.eye(dim)
    # vec(A X B) = (B^T kron A) vec(X)
    return g * (2 * np.kron(a, a) - np.kron(eye, ada) - np.kron(ada.T, eye))


def build_liouvillian(h, d: DecoherenceParams | None = None) -> Liouvillian:
    h = as_operator(h)
    if not np.allclose(h, h.conj().T, atol=1e-12, rtol=0):
        raise ParameterError("Hamiltonian must be Hermitian")
    dim = h.shape[0]
    eye = np.eye(dim)
    mat = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    if d is not None:
        channels = WORKING_CHANNELS + (LEAKAGE_CHANNELS if dim == 7 else ())
        for name, lower, upper in channels:
            g = getattr(d, name)
            if g:
                mat += _jump_superop(dim, g, index(lower, dim), index(upper, dim))
        off = 1.0 - eye
        mat -= d.gamma_dephase * np.diag(vec(off))
    return Liouvillian(dim, mat)
