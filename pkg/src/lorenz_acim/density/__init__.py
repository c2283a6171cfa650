"""Invariant densities: transfer operator, Ulam discretisation and closed forms."""
from .closed_forms import (
    density_stats,
    markov_density,
    markov_density_n,
    markov_map,
    markov_map_n,
    parry_density,
    parry_tail_bound,
    renormalized_density,
)
from .step import CSV_HEADER, StepDensity, refine, stats
from .transfer import birkhoff_average, invariance_residual, pf_apply, pf_power
from .ulam import UlamOperator, ulam_matrix, ulam_stationary

__all__ = [
    "CSV_HEADER",
    "StepDensity",
    "UlamOperator",
    "birkhoff_average",
    "density_stats",
    "invariance_residual",
    "markov_density",
    "markov_density_n",
    "markov_map",
    "markov_map_n",
    "parry_density",
    "parry_tail_bound",
    "pf_apply",
    "pf_power",
    "refine",
    "renormalized_density",
    "stats",
    "ulam_matrix",
    "ulam_stationary",
]
