"""Basis labels, operator primitives and density-matrix checks.

Operators are plain complex ``numpy`` arrays of shape ``(dim, dim)`` with
``dim`` 5 (working states) or 7 (working states plus the two leakage states).
Rows and columns follow :data:`BASIS_ORDER`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BasisError

ALLOWED_DIMS = (5, 7)


class StateLabel(enum.Enum):
    G_L = "1_L"
    G_R = "1_R"
    M_L = "2_L"
    M_R = "2_R"
    E = "3"
    X_L = "4_L"
    X_R = "4_R"

    @property
    def chirality(self) -> str | None:
        if self.name.endswith("_L"):
            return "L"
        if self.name.endswith("_R"):
            return "R"
        return None

    @property
    def mirror(self) -> "StateLabel":
        """The L<->R partner; the achiral excited state maps to itself."""
        if self.chirality is None:
            return self
        other = "R" if self.chirality == "L" else "L"
        return StateLabel[self.name[:-1] + other]


BASIS_ORDER = (
    StateLabel.G_L,
    StateLabel.G_R,
    StateLabel.M_L,
    StateLabel.M_R,
    StateLabel.E,
    StateLabel.X_L,
    StateLabel.X_R,
)


def basis(dim: int) -> tuple[StateLabel, ...]:
    check_dim(dim)
    return BASIS_ORDER[:dim]


def check_dim(dim: int) -> None:
    if dim not in ALLOWED_DIMS:
        raise BasisError(f"dimension must be one of {ALLOWED_DIMS}, got {dim}")


def index(label: StateLabel, dim: int) -> int:
    i = BASIS_ORDER.index(label)
    if i >= dim:
        raise BasisError(f"label outside basis: {label.name} is not in the {dim}-level basis")
    return i


def as_operator(a, dim: int | None = None) -> np.ndarray:
    """Coerce ``a`` to a complex square matrix and check its dimension."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise BasisError(f"operator must be square, got shape {a.shape}")
    check_dim(a.shape[0])
    if dim is not None and a.shape[0] != dim:
        raise BasisError(f"dimension mismatch: expected {dim}, got {a.shape[0]}")
    return a


def basis_projector(p: StateLabel, q: StateLabel, dim: int) -> np.ndarray:
    """Return |p><q| in the ``dim``-level basis."""
    check_dim(dim)
    out = np.zeros((dim, dim), dtype=complex)
    out[index(p, dim), index(q, dim)] = 1.0
    return out


def swap_permutation(dim: int) -> np.ndarray:
    check_dim(dim)
    perm = [index(s.mirror, dim) for s in basis(dim)]
    return np.eye(dim)[perm]


def swap_chirality(a) -> np.ndarray:
    """Conjugate ``a`` by the L<->R permutation (an involution fixing |3>)."""
    a = as_operator(a)
    perm = [index(s.mirror, a.shape[0]) for s in basis(a.shape[0])]
    return a[np.ix_(perm, perm)]


def racemic_state(dim: int = 5) -> np.ndarray:
    """Equal incoherent mixture of the two chiral ground states."""
    rho = basis_projector(StateLabel.G_L, StateLabel.G_L, dim)
    rho += basis_projector(StateLabel.G_R, StateLabel.G_R, dim)
    return rho / 2


@dataclass(frozen=True)
class DensityReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    tol: float
    positivity_floor: float

    @property
    def hermitian(self) -> bool:
        return self.hermiticity_defect <= self.tol

    @property
    def unit_trace(self) -> bool:
        return self.trace_defect <= self.tol

    @property
    def positive(self) -> bool:
        return self.min_eigenvalue >= self.positivity_floor

    @property
    def ok(self) -> bool:
        return self.hermitian and self.unit_trace and self.positive

    def __str__(self):
        status = "pass" if self.ok else "fail"
        return (
            f"{status}: hermiticity defect {self.hermiticity_defect:.3e}, "
            f"trace defect {self.trace_defect:.3e}, min eigenvalue {self.min_eigenvalue:.3e}"
        )


def validate_density(rho, tol: float = 1e-10, positivity_floor: float = -1e-8) -> DensityReport:
    """Report Hermiticity, trace and positivity defects of ``rho``.

    Never raises on an unphysical state; callers decide what to do with
    the report.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rho = as_operator(rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho) - 1.0))
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
    return DensityReport(herm, trace, min_eig, tol, positivity_floor)
