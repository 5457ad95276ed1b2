"""Populations and the enantiomeric excess of the chiral ground states."""

from __future__ import annotations

from .errors import InvalidStateError, UndefinedExcessError
from .hilbert import StateLabel, as_operator, basis, index

IMAG_TOLERANCE = 1e-10
EXCESS_FLOOR = 1e-12


def population(rho, s: StateLabel) -> float:
    rho = as_operator(rho)
    value = rho[index(s, rho.shape[0]), index(s, rho.shape[0])]
    if abs(value.imag) > IMAG_TOLERANCE:
        raise InvalidStateError(
            f"population of {s.name} has imaginary part {value.imag:.3e}; state is corrupt"
        )
    return float(value.real)


def populations(rho) -> dict[StateLabel, float]:
    rho = as_operator(rho)
    return {s: population(rho, s) for s in basis(rho.shape[0])}


def enantiomeric_excess(rho) -> float:
    """|P_1L - P_1R| / (P_1L + P_1R)."""
    p_left = population(rho, StateLabel.G_L)
    p_right = population(rho, StateLabel.G_R)
    total = p_left + p_right
    if total <= EXCESS_FLOOR:
        raise UndefinedExcessError(
            f"ground-state population {total:.3e} is below {EXCESS_FLOOR:g}; "
            "enantiomeric excess is undefined"
        )
    return abs(p_left - p_right) / total

