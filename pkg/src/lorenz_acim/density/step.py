"""Piecewise-constant functions on [0, 1].

Pieces are half-open, [t_{i-1}, t_i), with the last one closed. Values at
breakpoints have measure zero and never enter integrals. Breakpoints and
values may be Fractions, in which case all arithmetic stays exact.
"""
from __future__ import annotations

import csv
import io
import json
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import merge
from typing import Sequence

import numpy as np

from ..core_map import Number, format_number, parse_number
from ..errors import DegenerateEndpoints

CSV_HEADER = "# lorenz-acim v1"
SLIVER_TOL = 1e-14


@dataclass
class StepDensity:
    breakpoints: list[Number]
    values: list[Number]
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        bp, vals = self.breakpoints, self.values
        if len(bp) != len(vals) + 1 or not vals:
            raise ValueError("need len(breakpoints) == len(values) + 1 >= 2")
        if bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(u >= v for u, v in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly ascending")

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, value: Number = 1, exact: bool = True) -> "StepDensity":
        if exact:
            return cls([Fraction(0), Fraction(1)], [Fraction(value)])
        return cls([0.0, 1.0], [float(value)])

    @classmethod
    def from_pieces(cls, pieces, exact: bool | None = None) -> "StepDensity":
        """Build from (lo, hi, value) triples; gaps in [0, 1] are filled with 0."""
        pieces = sorted((lo, hi, v) for lo, hi, v in pieces if hi > lo)
        zero = Fraction(0) if exact or exact is None else 0.0
        bp: list[Number] = [zero]
        vals: list[Number] = []
        for lo, hi, v in pieces:
            if lo > bp[-1]:
                vals.append(zero)
                bp.append(lo)
            elif lo < bp[-1]:
                raise ValueError("overlapping pieces")
            vals.append(v)
            bp.append(hi)
        if bp[-1] < 1:
            vals.append(zero)
            bp.append(zero + 1)
        return cls(bp, vals)

    # -- queries ----------------------------------------------------------

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.breakpoints) and all(
            isinstance(v, Fraction) for v in self.values
        )

    @property
    def widths(self) -> list[Number]:
        bp = self.breakpoints
        return [v - u for u, v in zip(bp, bp[1:])]

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, x: Number) -> Number:
        if not 0 <= x <= 1:
            raise ValueError("x outside [0, 1]")
        i = bisect_right(self.breakpoints, x) - 1
        return self.values[min(i, len(self.values) - 1)]

    def evaluate_many(self, xs) -> np.ndarray:
        bp = np.array([float(t) for t in self.breakpoints])
        vals = np.array([float(v) for v in self.values])
        idx = np.searchsorted(bp, np.asarray(xs, dtype=float), side="right") - 1
        return vals[np.clip(idx, 0, len(vals) - 1)]

    def integral(self) -> Number:
        return sum((w * v for w, v in zip(self.widths, self.values)), self.values[0] * 0)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    # -- algebra ----------------------------------------------------------

    def scaled(self, k: Number) -> "StepDensity":
        return StepDensity(list(self.breakpoints), [k * v for v in self.values])

    def normalized(self) -> "StepDensity":
        total = self.integral()
        if total == 0:
            raise DegenerateEndpoints("density has zero integral and cannot be normalized")
        out = self.scaled(1 / total)
        out.meta = dict(self.meta)
        return out

    def __add__(self, other: "StepDensity") -> "StepDensity":
        bp, (u, v) = refine([self, other])
        return StepDensity(bp, [x + y for x, y in zip(u, v)]).simplified()

    def __sub__(self, other: "StepDensity") -> "StepDensity":
        bp, (u, v) = refine([self, other])
        return StepDensity(bp, [x - y for x, y in zip(u, v)]).simplified()

    def simplified(self) -> "StepDensity":
        """Drop breakpoints between equal values."""
        bp = [self.breakpoints[0]]
        vals = [self.values[0]]
        for t, v in zip(self.breakpoints[1:-1], self.values[1:]):
            if v == vals[-1]:
                continue
            bp.append(t)
            vals.append(v)
        bp.append(self.breakpoints[-1])
        return StepDensity(bp, vals, dict(self.meta))

    def without_slivers(self, tol: float = SLIVER_TOL) -> "StepDensity":
        """Merge float pieces narrower than ``tol`` into the previous piece.

        The merged value is the width-weighted mean, so the integral is kept.
        """
        if self.exact:
            return self
        bp = [self.breakpoints[0]]
        vals: list[Number] = []
        for t0, t1, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            w = t1 - t0
            if vals and (w < tol or bp[-1] - bp[-2] < tol):
                wp = bp[-1] - bp[-2]
                vals[-1] = (vals[-1] * wp + v * w) / (wp + w)
                bp[-1] = t1
            else:
                vals.append(v)
                bp.append(t1)
        return StepDensity(bp, vals, dict(self.meta))

    def l1_norm(self) -> Number:
        return sum((w * abs(v) for w, v in zip(self.widths, self.values)), self.values[0] * 0)

    def l1_distance(self, other: "StepDensity") -> Number:
        bp, (u, v) = refine([self, other])
        return sum(((t1 - t0) * abs(x - y) for t0, t1, x, y in zip(bp, bp[1:], u, v)), 0)

    def restricted_max(self, lo: Number, hi: Number) -> Number:
        """Largest value over pieces meeting the open interval (lo, hi)."""
        bp = self.breakpoints
        return max(v for t0, t1, v in zip(bp, bp[1:], self.values) if t1 > lo and t0 < hi)

    # -- io ---------------------------------------------------------------

    def to_csv(self, fh=None) -> str | None:
        own = fh is None
        fh = fh or io.StringIO()
        fh.write(CSV_HEADER + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["left_endpoint", "right_endpoint", "value"])
        bp = self.breakpoints
        for t0, t1, v in zip(bp, bp[1:], self.values):
            w.writerow([format_number(t0), format_number(t1), format_number(v)])
        return fh.getvalue() if own else None

    @classmethod
    def from_csv(cls, text_or_fh, exact: bool | None = None) -> "StepDensity":
        text = text_or_fh if isinstance(text_or_fh, str) else text_or_fh.read()
        rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        reader = csv.DictReader(rows)
        bp: list[Number] = []
        vals: list[Number] = []
        for row in reader:
            lo = parse_number(row["left_endpoint"], exact)
            if not bp:
                bp.append(lo)
            bp.append(parse_number(row["right_endpoint"], exact))
            vals.append(parse_number(row["value"], exact))
        return cls(bp, vals)

    def to_json(self) -> dict:
        enc = lambda x: str(x) if isinstance(x, Fraction) else x  # noqa: E731
        return {
            "breakpoints": [enc(t) for t in self.breakpoints],
            "values": [enc(v) for v in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "StepDensity":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            [parse_number(t) for t in obj["breakpoints"]],
            [parse_number(v) for v in obj["values"]],
        )


def refine(funcs: Sequence[StepDensity]) -> tuple[list[Number], list[list[Number]]]:
    """Common refinement: merged breakpoints and each function's values on it."""
    bp: list[Number] = []
    for t in merge(*(f.breakpoints for f in funcs)):
        if not bp or t != bp[-1]:
            bp.append(t)
    out = []
    for f in funcs:
        vals = []
        j = 0
        fb = f.breakpoints
        for t in bp[:-1]:
            while fb[j + 1] <= t:
                j += 1
            vals.append(f.values[j])
        out.append(vals)
    return bp, out


def stats(h: StepDensity) -> dict:
    """Integral, total variation, min, max and support measure of a step density."""
    vals = h.values
    tv = sum((abs(v - u) for u, v in zip(vals, vals[1:])), vals[0] * 0)
    support = sum((w for w, v in zip(h.widths, vals) if v > 0), vals[0] * 0)
    return {
        "integral": h.integral(),
        "total_variation": tv,
        "min": min(vals),
        "max": max(vals),
        "support_measure": support,
    }
