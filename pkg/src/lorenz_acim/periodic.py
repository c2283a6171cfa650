"""Minimal period, the minimal periodic orbit, and renormalization.

For an expanding map (ac + b(1-c) > 1) the minimal period kappa is found
from the first backward iterate of c that lands in [f(0), f(1)]. The unique
kappa-orbit is then recovered by solving every itinerary's affine
fixed-point equation, and the pair (P_L, P_R) bracketing c together with the
one-sided images A = f^kappa(c+), B = f^kappa(c-) decides whether the acim
has full support.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .classifier import boundary_sign
from .core_map import (
    MapParams,
    Number,
    Side,
    SidedPoint,
    branch_map,
    iterate,
    preimages,
    validate,
)
from .errors import (
    NoneFound,
    NotApplicable,
    NotRenormalizable,
    PreconditionViolation,
    UniquenessViolated,
    VerificationFailed,
)

MAX_DEPTH = 64
MERGE_TOL = 1e-9
DOMAIN_TOL = 1e-12
FLOAT_EQ_TOL = 1e-12


def _j(x):
    return str(x) if isinstance(x, Fraction) else x


@dataclass(frozen=True)
class InfiniteUpTo:
    """No hit within ``depth`` backward steps of c."""

    depth: int

    def to_json(self) -> dict:
        return {"infinite_up_to": self.depth}


Kappa = Union[int, InfiniteUpTo]


def fixed_points(p: MapParams) -> list[Number]:
    out = []
    if p.a != 1:
        x = p.left_offset / (1 - p.a)
        if 0 <= x < p.c:
            out.append(x)
    if p.b != 1:
        x = p.b * p.c / (p.b - 1)
        if p.c < x <= 1:
            out.append(x)
    return sorted(out)


def has_fixed_point(p: MapParams) -> Number | None:
    """Smallest fixed point of f, or None."""
    pts = fixed_points(p)
    return pts[0] if pts else None


def _require_expanding(p: MapParams) -> None:
    if boundary_sign(p) <= 0:
        raise PreconditionViolation("requires ac + b(1-c) > 1")


def _dedupe(values: list[Number], exact: bool) -> list[Number]:
    values = sorted(values)
    out: list[Number] = []
    for v in values:
        if out and (v == out[-1] if exact else abs(v - out[-1]) < 1e-14):
            continue
        out.append(v)
    return out


def minimal_period(p: MapParams, max_depth: int = MAX_DEPTH) -> Kappa:
    """kappa = 1 with a fixed point, else m + 2 with m the first depth at which
    the backward orbit of c meets [f(0), f(1)]."""
    _require_expanding(p)
    if fixed_points(p):
        return 1
    lo, hi = p.f0, p.f1
    level = [p.c]
    for i in range(max_depth + 1):
        if any(lo <= y <= hi for y in level):
            return i + 2
        nxt = [q.x for y in level for q in preimages(p, y)]
        level = _dedupe(nxt, p.exact)
        if not level:
            break
    return InfiniteUpTo(max_depth)


def one_sided_image(p: MapParams, side: Side, k: int) -> Number:
    """f^k(c+) or f^k(c-), continuing through c on the same side."""
    policy = "left" if side is Side.LEFT else "right"
    return iterate(p, SidedPoint(p.c, side), k, on_critical=policy).last


def one_sided_slope(p: MapParams, side: Side, k: int) -> Number:
    """Slope of f^k just to the given side of c."""
    policy = "left" if side is Side.LEFT else "right"
    tr = iterate(p, SidedPoint(p.c, side), k, on_critical=policy)
    m = tr.visit_counts[-1]
    return p.a ** (k - m) * p.b**m


@dataclass
class PeriodicStructure:
    kappa: int
    orbit: list[Number]
    p_left: Number
    p_right: Number
    A: Number
    B: Number
    M: Number | None = None
    itinerary: str = ""

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "orbit": [_j(x) for x in self.orbit],
            "p_left": _j(self.p_left),
            "p_right": _j(self.p_right),
            "A": _j(self.A),
            "B": _j(self.B),
            "M": _j(self.M),
            "itinerary": self.itinerary,
        }


def _in_branch(p: MapParams, x: Number, w: str) -> SidedPoint | None:
    tol = 0 if p.exact else DOMAIN_TOL
    if w == "L":
        if x == p.c:
            return SidedPoint(x, Side.LEFT)
        if -tol <= x < p.c + (0 if p.exact else tol):
            return SidedPoint(x)
    else:
        if x == p.c:
            return SidedPoint(x, Side.RIGHT)
        if p.c - (0 if p.exact else tol) < x <= 1 + tol:
            return SidedPoint(x)
    return None


def _realize(p: MapParams, word: str, slope, offset) -> list[SidedPoint] | None:
    if slope == 1:
        return None
    x = offset / (1 - slope)
    orbit = []
    for w in word:
        pt = _in_branch(p, x, w)
        if pt is None:
            return None
        orbit.append(pt)
        s, t = branch_map(p, w)
        x = s * x + t
    return orbit


def _enumerate_orbits(p: MapParams, kappa: int) -> list[tuple[str, list[SidedPoint]]]:
    one = Fraction(1) if p.exact else 1.0
    found = []
    stack = [("", one, p.zero())]
    while stack:
        word, s, t = stack.pop()
        if len(word) == kappa:
            orbit = _realize(p, word, s, t)
            if orbit is not None:
                found.append((word, orbit))
            continue
        for w in "RL":
            bs, bt = branch_map(p, w)
            stack.append((word + w, bs * s, bs * t + bt))
    return found


def _merge_orbits(p: MapParams, found):
    groups: list[tuple[str, list[SidedPoint]]] = []
    for word, orbit in found:
        key = sorted(pt.x for pt in orbit)
        degenerate = len(set(key)) < len(key) if p.exact else _has_close(key)
        if degenerate:
            continue
        for gw, go in groups:
            gkey = sorted(pt.x for pt in go)
            same = gkey == key if p.exact else max(abs(u - v) for u, v in zip(gkey, key)) < MERGE_TOL
            if same:
                break
        else:
            groups.append((word, orbit))
    return groups


def _has_close(xs) -> bool:
    return any(abs(u - v) < MERGE_TOL for u, v in zip(xs, xs[1:]))


def kappa2_closed_forms(p: MapParams) -> tuple[Number, Number]:
    """(P_L, P_R) of the 2-cycle from the closed-form solution."""
    ab = p.a * p.b
    pl = (ab * p.c + p.b * p.c - p.b) / (ab - 1)
    pr = (ab * p.c + p.a * p.c - 1) / (ab - 1)
    return pl, pr


def _close(p: MapParams, x, y, tol=1e-10) -> bool:
    return x == y if p.exact else abs(x - y) <= tol


def periodic_orbit(p: MapParams, kappa: int) -> PeriodicStructure:
    """The unique kappa-periodic orbit with its bracketing pair and boundary images."""
    if kappa < 1:
        raise ValueError("kappa must be positive")
    if kappa == 1:
        # several fixed points may coexist (0 and 1 for the doubling map)
        pts = fixed_points(p)
        if not pts:
            raise NoneFound("no fixed point")
        x = pts[0]
        return PeriodicStructure(1, pts, x, x, x, x, None, "")
    groups = _merge_orbits(p, _enumerate_orbits(p, kappa))
    if not groups:
        raise NoneFound(f"no periodic orbit of period {kappa}")
    if len(groups) > 1:
        raise UniquenessViolated(f"{len(groups)} distinct orbits of period {kappa}")
    word, orbit = groups[0]
    orbit_sorted = sorted(orbit, key=lambda q: (q.x, q.side is Side.RIGHT))
    left = [q for q in orbit_sorted if q.x < p.c or (q.x == p.c and q.side is not Side.RIGHT)]
    right = [q for q in orbit_sorted if q.x > p.c or (q.x == p.c and q.side is Side.RIGHT)]
    if not left or not right:
        raise NoneFound("periodic orbit does not bracket c")
    pl, pr = left[-1].x, right[0].x
    A = one_sided_image(p, Side.RIGHT, kappa)
    B = one_sided_image(p, Side.LEFT, kappa)
    M = None
    if kappa == 2:
        cpl, cpr = kappa2_closed_forms(p)
        if not (_close(p, cpl, pl) and _close(p, cpr, pr)):
            raise VerificationFailed(
                f"2-cycle ({pl}, {pr}) disagrees with closed form ({cpl}, {cpr})"
            )
        M = _m_ratio(p.c - A, B - p.c)
    return PeriodicStructure(kappa, [q.x for q in orbit_sorted], pl, pr, A, B, M, word)


def _m_ratio(u, v):
    if u <= 0 or v <= 0:
        return u * 0
    return min(u / v, v / u)


# --- equivalence verdict -------------------------------------------------


@dataclass(frozen=True)
class Equivalent:
    reason: str  # "FixedPoint" | "IntervalEscape" | "ExactMatch"
    kappa: int = 1
    structure: PeriodicStructure | None = field(default=None, compare=False)

    equivalent = True

    def to_json(self) -> dict:
        out = {"kind": "Equivalent", "reason": self.reason, "kappa": self.kappa}
        if self.structure is not None:
            out["structure"] = self.structure.to_json()
        return out


@dataclass(frozen=True)
class NotEquivalent:
    gaps: tuple[tuple[Number, Number], ...]
    kappa: int = 2
    structure: PeriodicStructure | None = field(default=None, compare=False)

    equivalent = False

    def to_json(self) -> dict:
        out = {
            "kind": "NotEquivalent",
            "gaps": [[_j(lo), _j(hi)] for lo, hi in self.gaps],
            "kappa": self.kappa,
        }
        if self.structure is not None:
            out["structure"] = self.structure.to_json()
        return out


@dataclass(frozen=True)
class NotApplicableVerdict:
    reason: str

    equivalent = None

    def to_json(self) -> dict:
        return {"kind": "NotApplicable", "reason": self.reason}


EquivalenceVerdict = Union[Equivalent, NotEquivalent, NotApplicableVerdict]


def _cmp(p: MapParams, x, y) -> int:
    """-1, 0, 1 comparison; floats within 1e-12 count as equal."""
    if not p.exact and abs(x - y) <= FLOAT_EQ_TOL:
        return 0
    return (x > y) - (x < y)


def kappa2_criterion(p: MapParams, M: Number) -> bool:
    """Closed-form equivalence test for kappa = 2 in terms of ab and M."""
    ab = p.a * p.b
    if M == 1:
        return ab >= 2
    return ab > 1 + M


def equivalence_check(p: MapParams, max_depth: int = MAX_DEPTH) -> EquivalenceVerdict:
    """Whether the acim of an expanding map is equivalent to Lebesgue measure."""
    if boundary_sign(p) <= 0:
        return NotApplicableVerdict("requires ac + b(1-c) > 1")
    kappa = minimal_period(p, max_depth)
    if isinstance(kappa, InfiniteUpTo):
        return NotApplicableVerdict(f"minimal period exceeds search depth {kappa.depth}")
    if kappa == 1:
        return Equivalent("FixedPoint", 1)
    st = periodic_orbit(p, kappa)
    lo_cmp = _cmp(p, st.A, st.p_left)
    hi_cmp = _cmp(p, st.B, st.p_right)
    if lo_cmp < 0 or hi_cmp > 0:
        verdict: EquivalenceVerdict = Equivalent("IntervalEscape", kappa, st)
    elif lo_cmp == 0 and hi_cmp == 0:
        verdict = Equivalent("ExactMatch", kappa, st)
    else:
        gaps = []
        if lo_cmp > 0:
            gaps.append((st.p_left, st.A))
        if hi_cmp < 0:
            gaps.append((st.B, st.p_right))
        verdict = NotEquivalent(tuple(gaps), kappa, st)
    if kappa == 2:
        _cross_check_kappa2(p, st, verdict.equivalent)
    return verdict


def _cross_check_kappa2(p: MapParams, st: PeriodicStructure, equivalent: bool) -> None:
    closed = kappa2_criterion(p, st.M)
    if closed == equivalent:
        return
    if not p.exact:
        ab = p.a * p.b
        if abs(ab - (1 + st.M)) < 1e-9 or abs(st.M - 1) < 1e-9:
            return
    raise VerificationFailed(
        f"interval test says equivalent={equivalent} but ab-vs-1+M test says {closed}"
    )


# --- renormalization -----------------------------------------------------


@dataclass
class RenormData:
    interval: tuple[Number, Number]
    ell: int
    r: int
    rescaled: MapParams
    symmetric: bool
    kappa: int
    structure: PeriodicStructure | None = None

    def to_json(self) -> dict:
        return {
            "interval": [_j(self.interval[0]), _j(self.interval[1])],
            "ell": self.ell,
            "r": self.r,
            "rescaled": self.rescaled.to_json(),
            "symmetric": self.symmetric,
            "kappa": self.kappa,
        }

    def to_original(self, t: Number) -> Number:
        u, v = self.interval
        return u + (v - u) * t

    def to_unit(self, x: Number) -> Number:
        u, v = self.interval
        return (x - u) / (v - u)


def renormalize(p: MapParams, max_depth: int = MAX_DEPTH) -> RenormData | None:
    """The renormalization f^kappa on [A, B], rescaled to the unit interval.

    Returns None when [A, B] is not contained in [P_L, P_R].
    """
    kappa = minimal_period(p, max_depth)
    if isinstance(kappa, InfiniteUpTo):
        raise NotApplicable(f"minimal period exceeds search depth {kappa.depth}")
    if kappa == 1:
        raise NotRenormalizable("kappa = 1: the map has a fixed point")
    st = periodic_orbit(p, kappa)
    if _cmp(p, st.A, st.p_left) < 0 or _cmp(p, st.B, st.p_right) > 0:
        return None
    A, B = st.A, st.B
    sl = one_sided_slope(p, Side.LEFT, kappa)
    sr = one_sided_slope(p, Side.RIGHT, kappa)
    c_star = (p.c - A) / (B - A)
    rescaled = validate(sl, sr, c_star, exact=p.exact)
    symmetric = sl == sr if p.exact else abs(sl - sr) <= 1e-12 * max(sl, sr)
    return RenormData((A, B), kappa, kappa, rescaled, symmetric, kappa, st)


# --- covering identity ---------------------------------------------------


def interval_image(p: MapParams, lo: Number, hi: Number) -> list[tuple[Number, Number]]:
    """f([lo, hi]) as closed intervals, splitting at c."""
    fl = lambda x: p.a * x + p.left_offset  # noqa: E731
    fr = lambda x: p.b * (x - p.c)  # noqa: E731
    if hi <= p.c:
        return [(fl(lo), fl(hi) if hi < p.c else 1 + p.zero())]
    if lo >= p.c:
        return [(fr(lo) if lo > p.c else p.zero(), fr(hi))]
    return [(fl(lo), 1 + p.zero()), (p.zero(), fr(hi))]


def merge_intervals(intervals, tol: float = 0.0) -> list[tuple[Number, Number]]:
    out: list[list] = []
    for lo, hi in sorted(intervals):
        if out and (lo <= out[-1][1] or lo - out[-1][1] <= tol):
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def covering_union(p: MapParams, st: PeriodicStructure) -> list[tuple[Number, Number]]:
    """Union of f^i([P_L, P_R]) for i < kappa, as merged closed intervals."""
    tol = 0.0 if p.exact else 1e-12
    current = [(st.p_left, st.p_right)]
    collected = list(current)
    for _ in range(st.kappa - 1):
        current = merge_intervals(
            [iv for lo, hi in current for iv in interval_image(p, lo, hi)], tol
        )
        collected.extend(current)
    return merge_intervals(collected, tol)
