"""Rotation numbers, Lyapunov exponents and rationality of log a / log b."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .core_map import MapParams, iterate, lift_iterate, parse_number
from .errors import CriticalHit, DegenerateSlope, NotHomeomorphism

HOMEO_TOL = 1e-12
CF_DEPTH = 40
MAX_DENOMINATOR = 10**6


def is_homeomorphism(p: MapParams) -> bool:
    """f(0) = f(1): exactly in exact mode, within 1e-12 otherwise."""
    if p.exact:
        return p.f0 == p.f1
    return abs(p.f0 - p.f1) <= HOMEO_TOL


def rotation_number_homeo(p: MapParams) -> float:
    """Rotation number of a homeomorphic map, the root of a^(1-rho) b^rho = 1."""
    if not is_homeomorphism(p):
        raise NotHomeomorphism(f"f(0) = {p.f0} differs from f(1) = {p.f1}")
    if p.a == 1 and p.b == 1:
        return float(1 - p.c)
    la, lb = math.log(p.a), math.log(p.b)
    return 1 + lb / (la - lb)


def exact_rotation_number(p: MapParams) -> Fraction | None:
    """The rotation number as a Fraction when it is certifiably rational.

    Only available in exact mode; returns None for an irrational rotation.
    """
    if not p.exact:
        raise ValueError("exact_rotation_number needs exact parameters")
    if not is_homeomorphism(p):
        raise NotHomeomorphism(f"f(0) = {p.f0} differs from f(1) = {p.f1}")
    if p.a == 1 and p.b == 1:
        return Fraction(1 - p.c)
    verdict = log_ratio_rationality(p.a, p.b)
    if not isinstance(verdict, RationalRatio):
        return None
    # log a / log b = p/q  =>  rho = p / (p - q)
    return Fraction(verdict.p, verdict.p - verdict.q)


@dataclass(frozen=True)
class RotationEstimate:
    lo: float
    hi: float
    n: int

    @property
    def error_bound(self) -> float:
        return 1.0 / self.n

    def brackets(self, rho: float) -> bool:
        e = self.error_bound
        return self.lo - e <= rho <= self.hi + e

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "n": self.n, "error_bound": self.error_bound}


def rotation_interval_estimate(p: MapParams, n: int) -> RotationEstimate:
    """Empirical rotation interval [F^n(0)/n, (F^n(1) - 1)/n].

    The lower endpoint follows the right-continuous lift from 0 and the
    upper one the left-continuous lift from 1. Computed in floats.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    q = p.to_float()
    lo = lift_iterate(q, 0.0, n, side="right") / n
    hi = (lift_iterate(q, 1.0, n, side="left") - 1) / n
    return RotationEstimate(lo, hi, n)


def lyapunov_estimate(p: MapParams, x, n: int) -> float:
    """Finite-time exponent (1 - m_n/n) log a + (m_n/n) log b along the orbit of x."""
    if n < 1:
        raise ValueError("n must be >= 1")
    trace = iterate(p, x, n)
    if trace.steps < n:
        raise CriticalHit(trace.critical_hit)
    m = trace.visit_counts[-1]
    return (1 - m / n) * math.log(p.a) + (m / n) * math.log(p.b)


def visit_count_paths(p: MapParams, xs, n: int) -> np.ndarray:
    """m_k(x) for k = 0..n and every x in ``xs``; shape (n + 1, len(xs)).

    Float orbits, vectorised over the starting points. Exact hits of c are
    treated as c+ (a measure-zero choice).
    """
    q = p.to_float()
    x = np.asarray(xs, dtype=float).copy()
    out = np.zeros((n + 1, x.size), dtype=np.int64)
    m = np.zeros(x.size, dtype=np.int64)
    for k in range(1, n + 1):
        right = x >= q.c
        m = m + right
        out[k] = m
        x = np.where(right, q.b * (x - q.c), q.a * x + q.left_offset)
    return out


def max_visit_deviation(p: MapParams, xs, n: int, rho: float | None = None) -> float:
    """max over k <= n and x in xs of |m_k(x) - k rho|."""
    if rho is None:
        rho = rotation_number_homeo(p)
    counts = visit_count_paths(p, xs, n)
    k = np.arange(n + 1)[:, None]
    return float(np.abs(counts - k * rho).max())


# --- rationality of log a / log b ----------------------------------------


@dataclass(frozen=True)
class RationalRatio:
    """log a / log b = p / q, i.e. a^q = b^p."""

    p: int
    q: int
    verified: bool

    def to_json(self) -> dict:
        return {"kind": "rational", "p": self.p, "q": self.q, "verified": self.verified}


@dataclass(frozen=True)
class IrrationalRatio:
    reason: str

    def to_json(self) -> dict:
        return {"kind": "irrational", "reason": self.reason}


@dataclass(frozen=True)
class UnknownAtDepth:
    depth: int
    best: tuple[int, int] | None = None

    def to_json(self) -> dict:
        best = list(self.best) if self.best else None
        return {"kind": "unknown", "depth": self.depth, "best": best}


LogRatioVerdict = Union[RationalRatio, IrrationalRatio, UnknownAtDepth]


def continued_fraction_convergents(x: float, depth: int, max_den: int = MAX_DENOMINATOR):
    """Convergents p/q of ``x`` up to ``depth`` terms or denominator ``max_den``."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    out = []
    for _ in range(depth):
        ai = math.floor(x)
        h0, h1 = h1, ai * h1 + h0
        k0, k1 = k1, ai * k1 + k0
        if k1 > max_den:
            break
        out.append((h1, k1))
        frac = x - ai
        if frac < 1e-15:
            break
        x = 1 / frac
    return out


def coprime_base(nums) -> list[int]:
    """Pairwise coprime integers > 1 over which every input factors."""
    base = sorted({n for n in nums if n > 1})
    changed = True
    while changed:
        changed = False
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                g = math.gcd(base[i], base[j])
                if g > 1:
                    x, y = base[i], base[j]
                    rest = [v for k, v in enumerate(base) if k not in (i, j)]
                    base = sorted({v for v in rest + [x // g, y // g, g] if v > 1})
                    changed = True
                    break
            if changed:
                break
    return base


def _exponents(n: int, base: list[int]) -> list[int]:
    out = []
    for e in base:
        k = 0
        while n % e == 0:
            n //= e
            k += 1
        out.append(k)
    if n != 1:
        raise ArithmeticError("value does not factor over the base")
    return out


def _exponent_vector(x: Fraction, base: list[int]) -> list[int]:
    num = _exponents(x.numerator, base)
    den = _exponents(x.denominator, base)
    return [u - v for u, v in zip(num, den)]


def log_ratio_rationality(a, b, depth: int = CF_DEPTH) -> LogRatioVerdict:
    """Decide whether log a / log b is rational.

    Exact rational inputs are decided completely: over a coprime base the
    two exponent vectors are proportional iff a^q = b^p for some integers,
    and any such (p, q) is re-checked by exact powering. Float inputs only
    get the best continued-fraction convergent up to ``depth``.
    """
    a = parse_number(a)
    b = parse_number(b)
    if a <= 0 or b <= 0:
        raise ValueError("slopes must be positive")
    if a == 1 or b == 1:
        raise DegenerateSlope("log a / log b is undefined or zero when a slope equals 1")
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        base = coprime_base([a.numerator, a.denominator, b.numerator, b.denominator])
        va = _exponent_vector(a, base)
        vb = _exponent_vector(b, base)
        ratio = None
        for x, y in zip(va, vb):
            if y == 0 and x == 0:
                continue
            if y == 0 or x == 0:
                ratio = None
                break
            r = Fraction(x, y)
            if ratio is None:
                ratio = r
            elif r != ratio:
                ratio = None
                break
        else:
            if ratio is not None:
                p, q = ratio.numerator, ratio.denominator
                ok = a**q == b**p
                return RationalRatio(p, q, ok)
        return IrrationalRatio(
            f"exponent vectors of a and b over coprime base {base} are not proportional"
        )
    x = math.log(a) / math.log(b)
    conv = continued_fraction_convergents(x, depth)
    return UnknownAtDepth(depth, conv[-1] if conv else None)
