"""Double-Delta Hamiltonian and its second-order effective forms.

All frequencies are angular, in rad/us; times are in us. Use
:meth:`ModelParams.from_mhz` to build parameters from linear frequencies
quoted as ``2*pi x value MHz``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError
from .hilbert import StateLabel, basis_projector, index

TWO_PI = 2 * math.pi

# Upper end of experimentally available coupling strengths for rotational
# transitions (2*pi x 10 MHz).
COUPLING_LIMIT = TWO_PI * 10.0

L, R = "L", "R"
GROUND = {L: StateLabel.G_L, R: StateLabel.G_R}
MEDIATE = {L: StateLabel.M_L, R: StateLabel.M_R}
EXCITED = StateLabel.E

REDUCED_BASIS = (StateLabel.G_L, StateLabel.G_R, StateLabel.E)


@dataclass(frozen=True)
class ModelParams:
    """Field parameters of the double-Delta scheme (rad/us, radians)."""

    delta: float
    omega21: float
    omega32: float
    omega31: float
    phi: float = 0.0
    extended: bool = False

    def __post_init__(self):
        for name in ("delta", "omega21", "omega32", "omega31", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        for name in ("omega21", "omega32", "omega31"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def from_mhz(cls, delta, omega21, omega32, omega31, phi=0.0, extended=False):
        return cls(
            delta=TWO_PI * delta,
            omega21=TWO_PI * omega21,
            omega32=TWO_PI * omega32,
            omega31=TWO_PI * omega31,
            phi=phi,
            extended=extended,
        )

    @property
    def dim(self) -> int:
        return 7 if self.extended else 5

    def phase(self, q: str) -> complex:
        """exp(i*phi_Q) with phi_L = phi and phi_R = phi + pi."""
        base = complex(math.cos(self.phi), math.sin(self.phi))
        return base if q == L else -base

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def bound(self) -> "ModelParams":
        """Copy with omega31 re-solved so that omega31 = omega32*omega21/delta."""
        return self.replace(omega31=selective_omega31(self))


def selective_omega31(p: ModelParams) -> float:
    _require_detuning(p)
    if p.delta < 0:
        raise ParameterError("omega31 = omega32*omega21/delta needs delta > 0 (all couplings positive)")
    return p.omega32 * p.omega21 / p.delta


def _require_detuning(p: ModelParams):
    if p.delta == 0:
        raise ParameterError(
            "delta = 0: the effective parameters (Lambda = -omega32^2/delta, ...) are singular"
        )


@dataclass(frozen=True)
class EffectiveParams:
    lam: float
    lam_tilde: float
    delta_tilde: float
    omega_tilde_L: complex
    omega_tilde_R: complex

    def omega_tilde(self, q: str) -> complex:
        return self.omega_tilde_L if q == L else self.omega_tilde_R


@dataclass(frozen=True)
class RegimeReport:
    large_detuning_ok: bool
    detuning_ratio_32: float  # |delta| / omega32
    detuning_ratio_21: float  # |delta| / omega21
    coupling_ratio: float  # omega21 / omega31
    phase_residual: float
    coupling_residual: float
    rwa_warnings: list[str] = field(default_factory=list)

    @property
    def selective_condition_residuals(self) -> tuple[float, float]:
        return (self.phase_residual, self.coupling_residual)


def _place(h, p, q, value, dim):
    """Add ``value`` at (p, q) and its conjugate at (q, p)."""
    h += value * basis_projector(p, q, dim)
    h += np.conj(value) * basis_projector(q, p, dim)


def build_hamiltonian(p: ModelParams) -> np.ndarray:
    """Interaction-picture Hamiltonian of the double-Delta model.

    For ``p.extended`` the same five-level block is embedded in the 7-level
    basis; the leakage states carry no drive.
    """
    dim = p.dim
    h = np.zeros((dim, dim), dtype=complex)
    for q in (L, R):
        g, m = GROUND[q], MEDIATE[q]
        h[index(m, dim), index(m, dim)] = p.delta
        _place(h, g, m, p.omega21, dim)
        _place(h, m, EXCITED, p.omega32, dim)
        _place(h, g, EXCITED, p.omega31 * p.phase(q), dim)
    return h


def split_hamiltonian(p: ModelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (H0, H1, H2): detuning, far-detuned couplings, weak direct coupling."""
    h0 = np.zeros((5, 5), dtype=complex)
    h1 = np.zeros((5, 5), dtype=complex)
    h2 = np.zeros((5, 5), dtype=complex)
    for q in (L, R):
        g, m = GROUND[q], MEDIATE[q]
        h0 += p.delta * basis_projector(m, m, 5)
        _place(h1, g, m, p.omega21, 5)
        _place(h1, m, EXCITED, p.omega32, 5)
        _place(h2, g, EXCITED, p.omega31 * p.phase(q), 5)
    return h0, h1, h2


def build_s_operator(p: ModelParams) -> np.ndarray:
    """Anti-Hermitian generator S of the Frohlich-Nakajima transformation.

    S removes the far-detuned couplings to first order: [H0, S] + H1 = 0.
    """
    _require_detuning(p)
    s = np.zeros((5, 5), dtype=complex)
    for q in (L, R):
        m = MEDIATE[q]
        s += p.omega21 * basis_projector(GROUND[q], m, 5)
        s += p.omega32 * basis_projector(EXCITED, m, 5)
    s /= p.delta
    return s - s.conj().T


def frohlich_nakajima_transform(p: ModelParams) -> EffectiveParams:
    _require_detuning(p)
    lam = -p.omega32**2 / p.delta
    lam_tilde = -p.omega21**2 / p.delta
    two_photon = p.omega32 * p.omega21 / p.delta
    return EffectiveParams(
        lam=lam,
        lam_tilde=lam_tilde,
        delta_tilde=p.delta - lam - lam_tilde,
        omega_tilde_L=p.omega31 * p.phase(L) - two_photon,
        omega_tilde_R=p.omega31 * p.phase(R) - two_photon,
    )


def build_transformed_hamiltonian(p: ModelParams) -> np.ndarray:
    """Closed form of H0 + [H1, S]/2 + H2 in the 5-level basis.

    The commutator puts -Lambda (not +Lambda) on |2_L><2_R|; that sign is
    what the exact conjugation exp(-S) H exp(S) reproduces.
    """
    eff = frohlich_nakajima_transform(p)
    h = np.zeros((5, 5), dtype=complex)
    for q in (L, R):
        h += eff.delta_tilde * basis_projector(MEDIATE[q], MEDIATE[q], 5)
    _place(h, StateLabel.M_L, StateLabel.M_R, -eff.lam, 5)
    h += 2 * eff.lam * basis_projector(EXCITED, EXCITED, 5)
    for q in (L, R):
        h += eff.lam_tilde * basis_projector(GROUND[q], GROUND[q], 5)
        _place(h, GROUND[q], EXCITED, eff.omega_tilde(q), 5)
    return h


def build_reduced_hamiltonian(p: ModelParams) -> np.ndarray:
    """Three-level Hamiltonian over (1_L, 1_R, 3) after eliminating |2_Q>."""
    eff = frohlich_nakajima_transform(p)
    h = np.zeros((3, 3), dtype=complex)
    h[2, 2] = 2 * eff.lam
    for i, q in enumerate((L, R)):
        h[i, i] = eff.lam_tilde
        h[i, 2] = eff.omega_tilde(q)
        h[2, i] = np.conj(eff.omega_tilde(q))
    return h


def embed_reduced(h3: np.ndarray, dim: int = 5) -> np.ndarray:
    """Place a (1_L, 1_R, 3) operator into the full basis, zero elsewhere."""
    idx = [index(s, dim) for s in REDUCED_BASIS]
    out = np.zeros((dim, dim), dtype=complex)
    out[np.ix_(idx, idx)] = h3
    return out


def check_selective_condition(p: ModelParams) -> RegimeReport:
    """Residuals of phi = 0, omega31 = omega32*omega21/delta and regime margins."""
    phase_res = abs(math.remainder(p.phi, TWO_PI))
    if p.delta == 0:
        ratio32 = ratio21 = 0.0
        coupling_res = math.inf
    else:
        ratio32 = abs(p.delta) / p.omega32
        ratio21 = abs(p.delta) / p.omega21
        coupling_res = abs(p.omega31 - p.omega32 * p.omega21 / p.delta)
    coupling_ratio = p.omega21 / p.omega31

    warnings = []
    for name in ("omega21", "omega32", "omega31"):
        value = getattr(p, name)
        if value > COUPLING_LIMIT:
            warnings.append(
                f"{name} = 2pi x {value / TWO_PI:.6g} MHz exceeds the typical available "
                f"coupling of 2pi x {COUPLING_LIMIT / TWO_PI:.6g} MHz"
            )
    # "much larger" is taken as at least an order of magnitude
    large = min(ratio32, ratio21, coupling_ratio) >= 10.0
    if not large:
        warnings.append(
            "large-detuning ordering |delta| >> omega32 ~ omega21 >> omega31 is not satisfied"
        )
    return RegimeReport(
        large_detuning_ok=large,
        detuning_ratio_32=ratio32,
        detuning_ratio_21=ratio21,
        coupling_ratio=coupling_ratio,
        phase_residual=phase_res,
        coupling_residual=coupling_res,
        rwa_warnings=warnings,
    )


def default_params(**changes) -> ModelParams:
    """Reference field: delta 20 MHz, omega21 = omega32 = 1 MHz, omega31 = 0.05 MHz (selective point)."""
    p = ModelParams.from_mhz(delta=20.0, omega21=1.0, omega32=1.0, omega31=0.05, phi=0.0)
    return p.replace(**changes) if changes else p
