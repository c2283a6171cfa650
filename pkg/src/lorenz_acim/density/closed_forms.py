"""Closed-form invariant densities.

* the series density of the symmetric map f_{a,a,c}, built from the orbits of
  the two endpoints;
* the Markov densities g_{beta,k} and g_n;
* the density of a non-equivalent map, assembled from the series density of
  its renormalization.
"""
from __future__ import annotations

import math
from fractions import Fraction

from ..core_map import MapParams, Number, iterate, validate
from ..errors import (
    AsymmetricRenormalization,
    ConstraintViolation,
    DegenerateEndpoints,
    InvalidParams,
    NotApplicable,
    VerificationFailed,
)
from ..periodic import NotEquivalent, equivalence_check, renormalize
from .step import StepDensity, stats
from .transfer import pf_apply, pf_power

INVARIANCE_TOL = 1e-10
AUTO_TAIL = 1e-13


def _is_exact(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


def parry_tail_bound(a: Number, terms: int) -> float:
    """Bound 2 a^(1-T) / (a-1) on the mass dropped by truncating at T terms."""
    a = float(a)
    return 2 * a ** (1 - terms) / (a - 1)


def terms_for_tail(a: Number, tail: float = AUTO_TAIL) -> int:
    a = float(a)
    return max(2, math.ceil(1 + math.log(2 / ((a - 1) * tail)) / math.log(a)))


def parry_density(
    a: Number, c: Number, terms: int = 60, exact: bool | None = None
) -> StepDensity:
    """Series density of f_{a,a,c}, normalized to integral 1.

        g(x) = sum_{n<T, f^n(0) < x} a^-n  -  sum_{n<T, f^n(1) < x} a^-n

    The orbit of 0 continues through c+ and the orbit of 1 through c-.
    ``meta["tail_bound"]`` holds the truncation bound.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    p = validate(a, a, c, exact=exact)
    if not p.a > 1:
        raise InvalidParams("the series density needs slope a > 1")
    if p.f0 == 0 or p.f1 == 1:
        raise DegenerateEndpoints(
            f"an endpoint of {p} is fixed, so the series carries no orbit information"
        )
    tail = parry_tail_bound(p.a, terms)
    zero = p.zero()
    orbit0 = iterate(p, zero, terms - 1, on_critical="right").values()
    orbit1 = iterate(p, zero + 1, terms - 1, on_critical="left").values()

    jumps: dict[Number, Number] = {}
    w = zero + 1
    inv = 1 / p.a
    for y0, y1 in zip(orbit0, orbit1):
        jumps[y0] = jumps.get(y0, zero) + w
        jumps[y1] = jumps.get(y1, zero) - w
        w *= inv

    bp: list[Number] = [zero]
    vals: list[Number] = []
    level = jumps.pop(zero, zero)
    for t in sorted(t for t in jumps if 0 < t < 1):
        vals.append(level)
        bp.append(t)
        level += jumps[t]
    vals.append(level)
    bp.append(zero + 1)

    worst = min(vals)
    if worst < 0:
        if -worst > tail:
            raise VerificationFailed(
                f"series value {float(worst):.3g} is negative beyond the tail bound {tail:.3g}"
            )
        vals = [max(v, zero) for v in vals]
    g = StepDensity(bp, vals).simplified()
    if not p.exact:
        g = g.without_slivers()
    g = g.normalized()
    g.meta.update(tail_bound=tail, terms=terms)
    return g


# --- Markov maps ---------------------------------------------------------


def markov_map(beta: Number, k: int) -> MapParams:
    """f_{beta, alpha, 1/beta} with alpha = 1 / (beta^(k-1) (beta - 1))."""
    if k < 1 or int(k) != k:
        raise InvalidParams("k must be a positive integer")
    if not beta > 1:
        raise InvalidParams("beta must exceed 1")
    alpha = 1 / (beta ** (k - 1) * (beta - 1))
    try:
        return validate(beta, alpha, 1 / beta, exact=_is_exact(beta))
    except ConstraintViolation as err:
        raise InvalidParams(str(err)) from err


def markov_density(beta: Number, k: int, check: bool = True) -> StepDensity:
    """Normalized g_{beta,k}; invariance under pf_apply is verified."""
    p = markov_map(beta, k)
    beta = p.a
    zero = p.zero()
    base = 1 / (beta - 1)
    # value on (beta^-(i+1), beta^-i] is base + sum_{j<=i} beta^(j-1)
    cuts = [beta**-i for i in range(k, 0, -1)]
    bp = [zero] + cuts + [zero + 1]
    vals = []
    for i in range(k, -1, -1):
        vals.append(base + sum((beta ** (j - 1) for j in range(1, i + 1)), zero))
    g = StepDensity(bp, vals).normalized()
    if check:
        _check_fixed(p, g)
    return g


def markov_map_n(n: int) -> MapParams:
    if n < 2 or int(n) != n:
        raise InvalidParams("n must be an integer >= 2")
    return validate(Fraction(1), Fraction(n), 1 - Fraction(1, n))


def markov_density_n(n: int) -> StepDensity:
    """g_n = 2/(n+1) sum_{i<n} 1_[i/n, 1], invariant for f_{1,n,1-1/n}."""
    markov_map_n(n)
    bp = [Fraction(j, n) for j in range(n + 1)]
    vals = [Fraction(2 * (j + 1), n + 1) for j in range(n)]
    return StepDensity(bp, vals)


def _check_fixed(p: MapParams, g: StepDensity, tol: float = INVARIANCE_TOL) -> None:
    r = pf_apply(p, g).l1_distance(g)
    if (p.exact and r != 0) or r > tol:
        raise VerificationFailed(f"P g differs from g by {float(r):.3g} in L1")


# --- renormalized assembly ------------------------------------------------


def renormalized_density(p: MapParams, terms: int | None = None) -> StepDensity:
    """Density of a map whose acim is not equivalent to Lebesgue.

    The series density g_* of the rescaled renormalization is pulled back
    onto [A, B] (values divided by B - A, zero outside) and averaged along
    the first kappa transfer-operator images. By default the series length
    is chosen so that the truncation tail is below 1e-13.
    """
    verdict = equivalence_check(p)
    if not isinstance(verdict, NotEquivalent):
        raise NotApplicable(f"{p} has an equivalent acim; there is no renormalization to use")
    rd = renormalize(p)
    if rd is None:
        raise NotApplicable("[A, B] is not inside [P_L, P_R]")
    if not rd.symmetric:
        raise AsymmetricRenormalization(
            f"rescaled map {rd.rescaled} has unequal slopes; the series needs f_(a*,a*,c*)"
        )
    r = rd.rescaled
    if terms is None:
        terms = terms_for_tail(r.a)
    g_unit = parry_density(r.a, r.c, terms, exact=r.exact)

    A, B = rd.interval
    width = B - A
    pieces = [
        (rd.to_original(t0), rd.to_original(t1), v / width)
        for t0, t1, v in zip(g_unit.breakpoints, g_unit.breakpoints[1:], g_unit.values)
    ]
    g_star = StepDensity.from_pieces(pieces, exact=p.exact)

    kappa = rd.kappa
    back = pf_power(p, g_star, kappa)
    res = back.l1_distance(g_star)
    if res > INVARIANCE_TOL:
        raise VerificationFailed(f"P^kappa g_* differs from g_* by {float(res):.3g} in L1")

    total = g_star
    cur = g_star
    for _ in range(kappa - 1):
        cur = pf_apply(p, cur)
        total = total + cur
    g = total.scaled(1 / (p.zero() + kappa)).simplified()
    res = pf_apply(p, g).l1_distance(g)
    if res > INVARIANCE_TOL:
        raise VerificationFailed(f"P g differs from g by {float(res):.3g} in L1")
    g.meta.update(
        kappa=kappa,
        interval=(A, B),
        rescaled=r,
        terms=terms,
        tail_bound=g_unit.meta["tail_bound"],
        residual=float(res),
    )
    return g


def density_stats(h: StepDensity) -> dict:
    return stats(h)
