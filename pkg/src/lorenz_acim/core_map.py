"""Piecewise linear Lorenz maps f_{a,b,c} on [0, 1].

    f(x) = a*x + 1 - a*c   for x in [0, c)
    f(x) = b*(x - c)       for x in (c, 1]

The critical point is two-valued: ``c-`` maps to 1 and ``c+`` maps to 0.
Parameters given as integers, :class:`fractions.Fraction` or ``"p/q"``
strings are kept exact, and every derived quantity then stays rational.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

from .errors import AmbiguousCritical, ConstraintViolation

Number = Union[int, float, Fraction]

# Float preimages this close to a domain end are snapped onto it.
SNAP_TOL = 1e-13


def parse_number(value, exact: bool | None = None) -> Number:
    """Parse ints, floats, Fractions and strings like ``"3/7"`` or ``"0.25"``.

    With ``exact=None`` rationals stay exact and decimals become floats.
    ``exact=True`` reads decimals as the rational they spell, and
    ``exact=False`` forces floats.
    """
    if isinstance(value, str):
        s = value.strip()
        if "/" in s or _is_int_literal(s):
            value = Fraction(s)
        elif exact:
            value = Fraction(s)
        else:
            value = float(s)
    if exact is False:
        return float(value)
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Rational):
        return Fraction(value)
    if exact:
        return Fraction(repr(float(value)))
    return float(value)


def _is_int_literal(s: str) -> bool:
    return s.lstrip("+-").isdigit()


def format_number(x: Number) -> str:
    if isinstance(x, (Fraction, int)):
        return str(x)
    return repr(float(x))


@dataclass(frozen=True)
class MapParams:
    a: Number
    b: Number
    c: Number
    exact: bool = False

    @property
    def f0(self) -> Number:
        """f(0) = 1 - a c."""
        return 1 - self.a * self.c

    @property
    def f1(self) -> Number:
        """f(1) = b (1 - c)."""
        return self.b * (1 - self.c)

    @property
    def boundary_sum(self) -> Number:
        return self.a * self.c + self.b * (1 - self.c)

    @property
    def left_offset(self) -> Number:
        return 1 - self.a * self.c

    @property
    def right_offset(self) -> Number:
        return -self.b * self.c

    def to_float(self) -> "MapParams":
        return MapParams(float(self.a), float(self.b), float(self.c), exact=False)

    def zero(self) -> Number:
        return Fraction(0) if self.exact else 0.0

    def to_json(self) -> dict:
        if self.exact:
            return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "exact": True}
        return {"a": self.a, "b": self.b, "c": self.c, "exact": False}

    @classmethod
    def from_json(cls, obj: dict) -> "MapParams":
        exact = bool(obj.get("exact", False))
        return validate(obj["a"], obj["b"], obj["c"], exact=exact)

    def __str__(self) -> str:
        return f"f_{{{format_number(self.a)},{format_number(self.b)},{format_number(self.c)}}}"


def validate(a, b, c, exact: bool | None = None) -> MapParams:
    """Build a :class:`MapParams`, checking the constraints on (a, b, c).

    ``exact=None`` keeps exact arithmetic only when all three inputs are
    rational; a single float switches the whole map to floats.
    """
    vals = [parse_number(v, exact) for v in (a, b, c)]
    if exact is None:
        exact = all(isinstance(v, Fraction) for v in vals)
        if not exact:
            vals = [float(v) for v in vals]
    a, b, c = vals
    if not a > 0:
        raise ConstraintViolation("a > 0", f"a = {format_number(a)}")
    if not b > 0:
        raise ConstraintViolation("b > 0", f"b = {format_number(b)}")
    if not 0 < c < 1:
        raise ConstraintViolation("0 < c < 1", f"c = {format_number(c)}")
    if a * c > 1:
        raise ConstraintViolation("ac ≤ 1", f"ac = {format_number(a * c)}")
    if b * (1 - c) > 1:
        raise ConstraintViolation("b(1-c) ≤ 1", f"b(1-c) = {format_number(b * (1 - c))}")
    return MapParams(a, b, c, exact=bool(exact))


def beta_alpha_map(beta, alpha, exact: bool | None = None) -> MapParams:
    """The map S_{beta,alpha} = f_{beta, alpha, 1/beta}."""
    beta = parse_number(beta, exact)
    return validate(beta, alpha, 1 / beta, exact=exact)


class Side(enum.Enum):
    PLAIN = ""
    LEFT = "-"
    RIGHT = "+"


@dataclass(frozen=True)
class SidedPoint:
    x: Number
    side: Side = Side.PLAIN

    def __str__(self) -> str:
        return f"{format_number(self.x)}{self.side.value}"


def as_point(x) -> SidedPoint:
    return x if isinstance(x, SidedPoint) else SidedPoint(x)


def branch(p: MapParams, x) -> str:
    """``"L"`` or ``"R"``: which affine branch applies at ``x``."""
    pt = as_point(x)
    if pt.x < p.c:
        return "L"
    if pt.x > p.c:
        return "R"
    if pt.side is Side.LEFT:
        return "L"
    if pt.side is Side.RIGHT:
        return "R"
    raise AmbiguousCritical(f"x = c = {format_number(p.c)} needs a side (c- or c+)")


def branch_map(p: MapParams, which: str) -> tuple[Number, Number]:
    """(slope, offset) of the left or right branch."""
    if which == "L":
        return p.a, p.left_offset
    return p.b, p.right_offset


def evaluate(p: MapParams, x) -> Number:
    """f(x); at the critical point a side must be given."""
    pt = as_point(x)
    if branch(p, pt) == "L":
        return p.a * pt.x + p.left_offset
    return p.b * (pt.x - p.c)


def is_right(p: MapParams, pt: SidedPoint) -> bool:
    """Membership in (c, 1], with c+ counted as a right-branch point."""
    return pt.x > p.c or (pt.x == p.c and pt.side is Side.RIGHT)


@dataclass
class OrbitTrace:
    points: list[SidedPoint]
    visit_counts: list[int]
    log_deriv: float
    critical_hit: int | None = None

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    @property
    def last(self) -> Number:
        return self.points[-1].x

    def values(self) -> list[Number]:
        return [pt.x for pt in self.points]


_POLICY_SIDES = {"left": Side.LEFT, "right": Side.RIGHT}


def iterate(p: MapParams, x, n: int, on_critical: str = "stop") -> OrbitTrace:
    """Orbit of ``x`` for ``n`` steps with visit counts m_k and log-derivative.

    If a plain point of the orbit equals c the index is recorded in
    ``critical_hit``; ``on_critical="stop"`` ends the trace there while
    ``"left"`` / ``"right"`` continue through c- / c+.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if on_critical not in ("stop", "left", "right"):
        raise ValueError(f"unknown critical-hit policy {on_critical!r}")
    log_a, log_b = math.log(p.a), math.log(p.b)
    pt = as_point(x)
    points: list[SidedPoint] = []
    counts = [0]
    log_deriv = 0.0
    hit = None
    for k in range(n + 1):
        if pt.x == p.c and pt.side is Side.PLAIN:
            if hit is None:
                hit = k
            if on_critical == "stop":
                points.append(pt)
                break
            pt = SidedPoint(pt.x, _POLICY_SIDES[on_critical])
        points.append(pt)
        if k == n:
            break
        right = is_right(p, pt)
        counts.append(counts[-1] + int(right))
        log_deriv += log_b if right else log_a
        pt = SidedPoint(evaluate(p, pt))
    return OrbitTrace(points, counts[: len(points)], log_deriv, hit)


def lift_eval(p: MapParams, x: Number, side: str = "right") -> Number:
    """Degree-one lift F with F(0) = f(0) and F(x + k) = F(x) + k.

    On [0, 1) the lift is f(x) + 1_{(c,1]}(x). Unless f(0) = f(1) the lift
    jumps at the integers; ``side="right"`` takes F(k) = k + f(0) and
    ``side="left"`` the left limit k + f(1).
    """
    return lift_iterate(p, x, 1, side)


def lift_iterate(p: MapParams, x: Number, n: int, side: str = "right") -> Number:
    """F^n(x), keeping integer and fractional parts apart.

    The fractional part follows exactly the arithmetic of ``evaluate``, so
    F^n(x) = m_n + f^n(x) holds to rounding in float mode too.
    """
    if side not in ("left", "right"):
        raise ValueError(f"unknown side {side!r}")
    k = math.floor(x)
    u = x - k
    for _ in range(n):
        if side == "left" and u == 0:
            k, u = k - 1, u + 1
        elif side == "right" and u == 1:
            k, u = k + 1, u - 1
        if u > p.c:
            u = p.b * (u - p.c)
            k += 1
        else:
            u = p.a * u + p.left_offset
    return k + u


def preimages(p: MapParams, y: Number) -> list[SidedPoint]:
    """All points mapped to ``y`` (0, 1 or 2 of them), sorted."""
    out = []
    xl = (y - p.left_offset) / p.a
    xr = y / p.b + p.c
    if not p.exact:
        xl = _snap(xl, (0.0, p.c))
        xr = _snap(xr, (p.c, 1.0))
    if 0 <= xl < p.c:
        out.append(SidedPoint(xl))
    elif xl == p.c:
        out.append(SidedPoint(p.c, Side.LEFT))
    if xr == p.c:
        out.append(SidedPoint(p.c, Side.RIGHT))
    elif p.c < xr <= 1:
        out.append(SidedPoint(xr))
    return out


def _snap(x: float, targets: Iterable[float]) -> float:
    for t in targets:
        if abs(x - t) < SNAP_TOL:
            return t
    return x


@dataclass(frozen=True)
class AffinePiece:
    """x -> slope * x + offset on [lo, hi], with ``word`` the branch itinerary."""

    lo: Number
    hi: Number
    slope: Number
    offset: Number
    word: str = field(default="")

    def __call__(self, x: Number) -> Number:
        return self.slope * x + self.offset


def compose_pieces(p: MapParams, n: int, lo: Number = 0, hi: Number = 1) -> list[AffinePiece]:
    """f^n restricted to [lo, hi] as a list of affine pieces.

    Pieces are split wherever an intermediate image crosses c; an image
    that ends exactly at c is taken as the matching one-sided limit.
    """
    one = Fraction(1) if p.exact else 1.0
    pieces = [AffinePiece(lo, hi, one, p.zero(), "")]
    for _ in range(n):
        nxt = []
        for pc in pieces:
            y0, y1 = pc(pc.lo), pc(pc.hi)
            if y1 <= p.c:
                nxt.append(_extend(p, pc, pc.lo, pc.hi, "L"))
            elif y0 >= p.c:
                nxt.append(_extend(p, pc, pc.lo, pc.hi, "R"))
            else:
                xs = (p.c - pc.offset) / pc.slope
                nxt.append(_extend(p, pc, pc.lo, xs, "L"))
                nxt.append(_extend(p, pc, xs, pc.hi, "R"))
        pieces = nxt
    return pieces


def _extend(p: MapParams, pc: AffinePiece, lo, hi, which: str) -> AffinePiece:
    s, t = branch_map(p, which)
    return AffinePiece(lo, hi, s * pc.slope, s * pc.offset + t, pc.word + which)
