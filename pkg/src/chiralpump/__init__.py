"""Optical-pumping enantio-conversion in the five-level double-Delta model."""

__version__ = "0.1.0"

from .dynamics import TimeGrid, TimeSeries, compare_full_vs_effective, evolve_master, evolve_unitary
from .hilbert import StateLabel, basis_projector, racemic_state, swap_chirality, validate_density
from .lindblad import DecoherenceParams, build_liouvillian
from .model import (
    ModelParams,
    build_hamiltonian,
    build_reduced_hamiltonian,
    build_s_operator,
    build_transformed_hamiltonian,
    check_selective_condition,
    frohlich_nakajima_transform,
    default_params,
)
from .observables import enantiomeric_excess, population
from .steadystate import steady_epsilon, steady_state
from .sweep import preset, run_sweep
