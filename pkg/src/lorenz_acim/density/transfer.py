"""Frobenius-Perron operator of f_{a,b,c} acting on step densities.

    P h(x) = h((x - (1 - ac)) / a) / a * 1_[1-ac, 1](x)
           + h(x / b + c) / b          * 1_[0, b(1-c)](x)

Both branches are affine, so P maps step functions to step functions: each
piece of h on one side of c is carried to its forward image with its value
divided by the slope.
"""
from __future__ import annotations

from ..core_map import MapParams
from ..errors import BreakpointBudgetExceeded
from .step import StepDensity, refine

BREAKPOINT_BUDGET = 100_000


def _branch_image(p: MapParams, h: StepDensity, left: bool) -> StepDensity:
    zero = p.zero()
    one = zero + 1
    slope = p.a if left else p.b
    pieces = []
    bp = h.breakpoints
    for t0, t1, v in zip(bp, bp[1:], h.values):
        lo, hi = (t0, min(t1, p.c)) if left else (max(t0, p.c), t1)
        if lo >= hi:
            continue
        if left:
            y0, y1 = p.a * lo + p.left_offset, p.a * hi + p.left_offset
        else:
            y0, y1 = p.b * (lo - p.c), p.b * (hi - p.c)
        pieces.append((y0, y1, v / slope))
    if not p.exact:
        # float images can overshoot [0, 1] or overlap by an ulp
        fixed = []
        prev = 0.0
        for y0, y1, v in pieces:
            y0, y1 = max(y0, prev, 0.0), min(y1, 1.0)
            if y1 > y0:
                fixed.append((y0, y1, v))
                prev = y1
        pieces = fixed
    out_bp = [zero]
    vals = []
    for y0, y1, v in pieces:
        if y0 > out_bp[-1]:
            vals.append(zero)
            out_bp.append(y0)
        vals.append(v)
        out_bp.append(y1)
    if out_bp[-1] < one:
        vals.append(zero)
        out_bp.append(one)
    if not p.exact:
        out_bp[-1] = 1.0
    return StepDensity(out_bp, vals)


def pf_apply(p: MapParams, h: StepDensity, budget: int = BREAKPOINT_BUDGET) -> StepDensity:
    """Exact image P h of a step density under the transfer operator."""
    left = _branch_image(p, h, left=True)
    right = _branch_image(p, h, left=False)
    bp, (u, v) = refine([left, right])
    out = StepDensity(bp, [x + y for x, y in zip(u, v)]).simplified()
    if len(out.breakpoints) > budget:
        out = out.without_slivers()
        if len(out.breakpoints) > budget:
            raise BreakpointBudgetExceeded(
                f"{len(out.breakpoints)} breakpoints exceed the budget of {budget}"
            )
    elif not p.exact:
        out = out.without_slivers()
    return out


def pf_power(p: MapParams, h: StepDensity, n: int, budget: int = BREAKPOINT_BUDGET) -> StepDensity:
    for _ in range(n):
        h = pf_apply(p, h, budget)
    return h


def birkhoff_average(
    p: MapParams, h: StepDensity, n: int, budget: int = BREAKPOINT_BUDGET
) -> StepDensity:
    """(1/n) sum_{i<n} P^i h."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = h
    cur = h
    for _ in range(n - 1):
        cur = pf_apply(p, cur, budget)
        total = total + cur
    return total.scaled(p.zero() + 1 / (p.zero() + n) if p.exact else 1.0 / n).simplified()


def invariance_residual(p: MapParams, h: StepDensity) -> float:
    """||P h - h||_1."""
    return pf_apply(p, h).l1_distance(h)
