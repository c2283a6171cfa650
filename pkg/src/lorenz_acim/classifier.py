"""Existence and character of the acim of f_{a,b,c}.

The verdict is driven by the sign of ac + b(1-c) - 1. On the boundary the
map is a circle homeomorphism, and the rationality of its rotation number
(equivalently of log a / log b) separates the periodic case from the
uniquely ergodic one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core_map import (
    MapParams,
    Number,
    Side,
    SidedPoint,
    as_point,
    compose_pieces,
    evaluate,
    format_number,
    iterate,
)
from .errors import IndeterminateRationality, PreconditionViolation, VerificationFailed
from .rotation import MAX_DENOMINATOR, continued_fraction_convergents, exact_rotation_number

BOUNDARY_TOL = 1e-12
GRID_POINTS = 10_000
IDENTITY_TOL = 1e-12
# a float c carries ~1e-16 error; Pell-like irrationals reach 4e-13 at q ~ 1e6
RIGID_RATIONAL_TOL = 1e-14


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    return x


@dataclass(frozen=True)
class AcimClassification:
    boundary_sum: Number

    kind = "base"

    def to_json(self) -> dict:
        return {"kind": self.kind, "boundary_sum": _jsonable(self.boundary_sum)}


@dataclass(frozen=True)
class NoAcim(AcimClassification):
    kind = "NoAcim"


@dataclass(frozen=True)
class PeriodicIdentity(AcimClassification):
    n: int = 1
    kind = "PeriodicIdentity"

    def to_json(self) -> dict:
        return {**super().to_json(), "n": self.n}


@dataclass(frozen=True)
class UniqueEquivalentBounded(AcimClassification):
    r_lo: Number = 1
    r_hi: Number = 1
    kind = "UniqueEquivalentBounded"

    def to_json(self) -> dict:
        return {**super().to_json(), "r_lo": _jsonable(self.r_lo), "r_hi": _jsonable(self.r_hi)}


@dataclass(frozen=True)
class UniqueBoundedVariation(AcimClassification):
    kind = "UniqueBoundedVariation"


def density_bounds(p: MapParams) -> tuple[Number, Number]:
    """(r, 1/r) with r = min((a/b)^4, (b/a)^4)."""
    q = p.a / p.b
    r = min(q**4, q**-4)
    return r, 1 / r


def boundary_sign(p: MapParams) -> int:
    """Sign of ac + b(1-c) - 1; float inputs in the 1e-12 band give 0."""
    d = p.boundary_sum - 1
    if not p.exact and abs(d) <= BOUNDARY_TOL:
        return 0
    return (d > 0) - (d < 0)


def _rigid_float_rotation(p: MapParams) -> Fraction | None:
    """Rational rotation 1 - c for float a = b = 1, up to q <= 10^6 and 1e-14."""
    rho = 1 - float(p.c)
    for num, den in continued_fraction_convergents(rho, 40, MAX_DENOMINATOR):
        if abs(rho - num / den) <= RIGID_RATIONAL_TOL:
            return Fraction(num, den)
    return None


def rational_rotation(p: MapParams) -> Fraction | None:
    """Rotation number of a boundary map if rational, else None.

    Raises IndeterminateRationality for float maps that are not rigid
    rotations, since the question cannot be settled from floats.
    """
    if boundary_sign(p) != 0:
        raise PreconditionViolation("the map is not a homeomorphism (ac + b(1-c) != 1)")
    if p.exact:
        return exact_rotation_number(p)
    if p.a == 1 and p.b == 1:
        return _rigid_float_rotation(p)
    raise IndeterminateRationality(
        f"{p} lies within {BOUNDARY_TOL:g} of ac + b(1-c) = 1 in float arithmetic; "
        "pass exact rationals (p/q) to decide"
    )


def classify(p: MapParams) -> AcimClassification:
    s = p.boundary_sum
    sign = boundary_sign(p)
    if sign < 0:
        return NoAcim(s)
    if sign > 0:
        return UniqueBoundedVariation(s)
    rho = rational_rotation(p)
    if rho is not None:
        return PeriodicIdentity(s, identity_power(p))
    r_lo, r_hi = density_bounds(p)
    return UniqueEquivalentBounded(s, r_lo, r_hi)


def identity_power(p: MapParams) -> int:
    """Smallest n with f^n = id, the denominator of the rational rotation number.

    The identity is always checked: on every affine piece of f^n in exact
    mode, on a 10^4-point grid to 1e-12 in float mode.
    """
    rho = rational_rotation(p)
    if rho is None:
        raise PreconditionViolation("rotation number is irrational; no power of f is the identity")
    n = rho.denominator
    if p.exact:
        bad = [pc for pc in compose_pieces(p, n) if pc.slope != 1 or pc.offset != 0]
        if bad:
            raise VerificationFailed(f"f^{n} is not the identity on {len(bad)} piece(s)")
    else:
        worst = 0.0
        for i in range(GRID_POINTS):
            x = (i + 0.5) / GRID_POINTS
            y = iterate(p, x, n, on_critical="left").last
            d = abs(y - x)
            worst = max(worst, min(d, 1 - d))
        if worst > IDENTITY_TOL:
            raise VerificationFailed(f"|f^{n}(x) - x| reached {worst:.3g} on the grid")
    return n


def conjugacy_condition(p: MapParams) -> bool:
    """c sqrt(a) + (1 - c) sqrt(b) > 1, decided exactly for rational input."""
    if not p.exact:
        return p.c * math.sqrt(p.a) + (1 - p.c) * math.sqrt(p.b) > 1
    # u + v > 1 with u = c sqrt(a), v = (1-c) sqrt(b), by squaring twice
    u2 = p.c**2 * p.a
    v2 = (1 - p.c) ** 2 * p.b
    if u2 > 1:
        return True
    rhs = 1 + u2 - v2  # v > 1 - u  <=>  2u > rhs
    if rhs < 0:
        return True
    return 4 * u2 > rhs**2


def h_s(s: Number, x: Number) -> Number:
    return s * x / (1 + (s - 1) * x)


def h_s_inverse(s: Number, y: Number) -> Number:
    return y / (s - (s - 1) * y)


def conjugate_map_eval(p: MapParams, s: Number, x) -> Number:
    """h_s(f(h_s^{-1}(x))) for the family h_s(x) = s x / (1 + (s-1) x)."""
    if not s > 0:
        raise ValueError("s must be positive")
    pt = as_point(x)
    if pt.x == h_s(s, p.c):
        u = SidedPoint(p.c, pt.side)
    else:
        u = SidedPoint(h_s_inverse(s, pt.x))
        if u.x == p.c and pt.side is not Side.PLAIN:
            u = SidedPoint(p.c, pt.side)
    return h_s(s, evaluate(p, u))


def describe(cls: AcimClassification) -> str:
    s = format_number(cls.boundary_sum)
    if isinstance(cls, PeriodicIdentity):
        return f"{cls.kind} n={cls.n} boundary_sum={s}"
    if isinstance(cls, UniqueEquivalentBounded):
        return (
            f"{cls.kind} bounds=[{format_number(cls.r_lo)}, {format_number(cls.r_hi)}] "
            f"boundary_sum={s}"
        )
    return f"{cls.kind} boundary_sum={s}"
