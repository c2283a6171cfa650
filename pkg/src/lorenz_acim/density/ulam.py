"""Ulam discretisation of the transfer operator on N uniform cells."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from ..core_map import MapParams, Number, format_number
from ..errors import NoConvergence
from .step import CSV_HEADER, StepDensity


@dataclass
class UlamOperator:
    """Row-stochastic matrix with entry (i, j) = m(cell_i ∩ f^{-1} cell_j) / m(cell_i).

    ``entries`` keeps the (possibly exact) COO triples; ``matrix`` is the float
    CSR view used for iteration.
    """

    N: int
    entries: list[tuple[int, int, Number]]
    exact: bool

    @property
    def matrix(self) -> sp.csr_matrix:
        if not hasattr(self, "_csr"):
            rows = [i for i, _, _ in self.entries]
            cols = [j for _, j, _ in self.entries]
            vals = [float(v) for _, _, v in self.entries]
            self._csr = sp.csr_matrix((vals, (rows, cols)), shape=(self.N, self.N))
        return self._csr

    def row_sums(self) -> list[Number]:
        sums: list[Number] = [Fraction(0) if self.exact else 0.0] * self.N
        for i, _, v in self.entries:
            sums[i] += v
        return sums

    def row_blocks(self, i: int) -> int:
        """Number of contiguous runs of nonzero columns in row ``i``."""
        cols = sorted(j for r, j, v in self.entries if r == i and v != 0)
        return sum(1 for k, j in enumerate(cols) if k == 0 or j != cols[k - 1] + 1)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def to_csv(self, fh=None) -> str | None:
        """Coordinate-list export: row, col, value."""
        own = fh is None
        fh = fh or io.StringIO()
        fh.write(CSV_HEADER + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "value"])
        for i, j, v in self.entries:
            w.writerow([i, j, format_number(v)])
        return fh.getvalue() if own else None


def ulam_matrix(p: MapParams, N: int) -> UlamOperator:
    """Ulam matrix from exact interval intersections of the two affine branches."""
    if N < 2:
        raise ValueError("N must be >= 2")
    one = Fraction(1) if p.exact else 1.0
    h = one / N
    entries = []
    for i in range(N):
        lo, hi = i * h, (i + 1) * h
        row: dict[int, Number] = {}
        parts = []
        if lo < p.c:
            parts.append((lo, min(hi, p.c), p.a, p.left_offset))
        if hi > p.c:
            parts.append((max(lo, p.c), hi, p.b, p.right_offset))
        for x0, x1, s, t in parts:
            y0, y1 = s * x0 + t, s * x1 + t
            j0 = max(math.floor(y0 * N), 0)
            j1 = min(math.ceil(y1 * N), N)
            for j in range(j0, j1):
                overlap = min(y1, (j + 1) * h) - max(y0, j * h)
                if overlap > 0:
                    row[j] = row.get(j, 0) + overlap / s * N
        entries.extend((i, j, v) for j, v in sorted(row.items()))
    return UlamOperator(N, entries, p.exact)


def ulam_stationary(u: UlamOperator, tol: float = 1e-10, max_iter: int = 100_000) -> StepDensity:
    """Stationary density of the Ulam chain.

    Power iteration on pi <- (pi + pi P) / 2, the Cesàro average of the last
    two iterates, which removes the oscillation of periodic chains. Stops
    when the L1 change drops below ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    PT = u.matrix.T.tocsr()
    pi = np.full(u.N, 1.0 / u.N)
    for k in range(max_iter):
        new = 0.5 * (pi + PT @ pi)
        new /= new.sum()
        if np.abs(new - pi).sum() < tol:
            return _to_density(new, k + 1)
        pi = new
    err = NoConvergence(max_iter)
    err.last = _to_density(pi, max_iter)
    raise err


def _to_density(pi: np.ndarray, iters: int) -> StepDensity:
    n = pi.size
    bp = [i / n for i in range(n + 1)]
    d = StepDensity(bp, list(pi * n))
    d.meta["iterations"] = iters
    return d
