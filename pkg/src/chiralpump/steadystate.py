"""Stationary states of the master equation via the Liouvillian null space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSteadyStateError, InvalidStateError
from .hilbert import as_operator, racemic_state, validate_density
from .lindblad import DecoherenceParams, build_liouvillian, unvec, vec
from .model import ModelParams, build_hamiltonian
from .observables import enantiomeric_excess

NULL_RTOL = 1e-10
RESIDUAL_LIMIT = 1e-9
STATE_TOLERANCE = 1e-8


@dataclass(frozen=True)
class SteadyState:
    rho: np.ndarray
    residual: float  # max |L vec(rho)|
    nullity: int
    singular_values: np.ndarray  # smallest few, ascending
    degenerate: bool = False

    @property
    def epsilon(self) -> float:
        return enantiomeric_excess(self.rho)


def _normalise(rho):
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def null_space(matrix: np.ndarray, rtol: float = NULL_RTOL):
    """Right null space from the SVD; returns (basis columns, singular values)."""
    _, s, vh = np.linalg.svd(matrix)
    rank = int(np.sum(s >= rtol * s[0]))
    return vh[rank:].conj().T, s


def steady_state(
    h,
    d: DecoherenceParams,
    allow_degenerate: bool = False,
    reference=None,
) -> SteadyState:
    """Unique unit-trace stationary density matrix of -i[H, rho] + L rho.

    A null space of dimension other than one raises
    :class:`DegenerateSteadyStateError`; without dissipation this is always
    the case. With ``allow_degenerate`` the
    null-space projection of ``reference`` is returned instead; by default
    the reference is the racemic state integrated for 200 us.
    """
    h = as_operator(h)
    dim = h.shape[0]
    liou = build_liouvillian(h, d)
    kernel, s = null_space(liou.matrix)
    nullity = kernel.shape[1]
    smallest = np.sort(s)[:4]

    if nullity == 1:
        v = kernel[:, 0]
        rho = unvec(v, dim)
        tr = np.trace(rho)
        if abs(tr) < 1e-12:
            raise InvalidStateError("null vector is traceless; no physical steady state")
        rho = _normalise(rho / tr)
        degenerate = False
    elif allow_degenerate and nullity > 1:
        if reference is None:
            from .dynamics import TimeGrid, evolve_master

            reference = evolve_master(racemic_state(dim), h, d, TimeGrid(t_end=200.0)).final_state
        ref = vec(as_operator(reference, dim))
        coeffs, *_ = np.linalg.lstsq(kernel, ref, rcond=None)
        rho = _normalise(unvec(kernel @ coeffs, dim))
        degenerate = True
    else:
        raise DegenerateSteadyStateError(nullity, smallest)

    report = validate_density(rho, tol=STATE_TOLERANCE)
    if not report.ok:
        raise InvalidStateError(f"no positive semidefinite steady state ({report})")
    residual = float(np.max(np.abs(liou.matrix @ vec(rho))))
    if not degenerate and residual > RESIDUAL_LIMIT:
        raise InvalidStateError(f"steady-state residual {residual:.3e} exceeds {RESIDUAL_LIMIT:g}")
    return SteadyState(rho, residual, nullity, smallest, degenerate)


def steady_epsilon(p: ModelParams, d: DecoherenceParams) -> float:
    """Enantiomeric excess of the steady state for the given field and rates."""
    return steady_state(build_hamiltonian(p), d).epsilon
