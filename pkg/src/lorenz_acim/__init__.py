"""Invariant densities of piecewise linear Lorenz maps f_{a,b,c} on [0, 1]."""
from .classifier import (
    AcimClassification,
    NoAcim,
    PeriodicIdentity,
    UniqueBoundedVariation,
    UniqueEquivalentBounded,
    classify,
    conjugacy_condition,
    identity_power,
)
from .core_map import MapParams, Side, SidedPoint, evaluate, iterate, validate
from .periodic import (
    Equivalent,
    NotEquivalent,
    equivalence_check,
    minimal_period,
    periodic_orbit,
    renormalize,
)
from .rotation import rotation_interval_estimate, rotation_number_homeo

__version__ = "0.1.0"

__all__ = [
    "AcimClassification",
    "Equivalent",
    "MapParams",
    "NoAcim",
    "NotEquivalent",
    "PeriodicIdentity",
    "Side",
    "SidedPoint",
    "UniqueBoundedVariation",
    "UniqueEquivalentBounded",
    "classify",
    "conjugacy_condition",
    "equivalence_check",
    "evaluate",
    "identity_power",
    "iterate",
    "minimal_period",
    "periodic_orbit",
    "renormalize",
    "rotation_interval_estimate",
    "rotation_number_homeo",
    "validate",
]
