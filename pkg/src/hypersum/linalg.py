"""Exact linear algebra over polynomial rings.

Solving is done by fraction-free Gaussian elimination with per-row content
stripping (row scaling preserves the solution set), which keeps entries small
on heavily parameterized systems.  Determinants use strict Bareiss so the
exact divisions are guaranteed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .poly import MPoly, RatFunc, poly_gcd

UNIQUE = "unique"
PARAMETRIC = "parametric"
INCONSISTENT = "inconsistent"


def _coerce_poly(x) -> MPoly:
    if isinstance(x, MPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MPoly.const(x)
    if isinstance(x, RatFunc):
        if not x.is_polynomial():
            raise TypeError("matrix entries must be polynomial")
        return x.as_poly()
    raise TypeError(f"bad matrix entry: {x!r}")


def bareiss_det(matrix) -> MPoly:
    """Determinant by the Bareiss fraction-free algorithm."""
    m = [[_coerce_poly(e) for e in row] for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return MPoly.one()
    sign = 1
    prev = MPoly.one()
    for i in range(n - 1):
        if m[i][i].is_zero:
            for r in range(i + 1, n):
                if not m[r][i].is_zero:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return MPoly.zero()
        piv = m[i][i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] = (piv * m[r][c] - m[r][i] * m[i][c]).divexact(prev)
            m[r][i] = MPoly.zero()
        prev = piv
    return m[n - 1][n - 1] * sign


def sylvester_resultant(p: MPoly, q: MPoly, v: str) -> MPoly:
    """Resultant of p and q with respect to v, via the Sylvester matrix."""
    dp, dq = p.degree(v), q.degree(v)
    if dp < 0 or dq < 0:
        return MPoly.zero()
    pc = p.coeffs_in(v)
    qc = q.coeffs_in(v)
    if dp == 0 and dq == 0:
        return MPoly.one()
    if dp == 0:
        return pc.get(0, MPoly.zero()) ** dq
    if dq == 0:
        return qc.get(0, MPoly.zero()) ** dp
    size = dp + dq
    zero = MPoly.zero()
    rows = []
    for i in range(dq):
        row = [zero] * size
        for d, c in pc.items():
            row[i + dp - d] = c
        rows.append(row)
    for i in range(dp):
        row = [zero] * size
        for d, c in qc.items():
            row[i + dq - d] = c
        rows.append(row)
    return bareiss_det(rows)


@dataclass
class LinearSolution:
    """Outcome of an exact linear solve.

    ``particular`` is one solution (None when inconsistent); ``nullspace``
    spans the homogeneous solutions, so the system is determined exactly
    when ``nullspace`` is empty.
    """

    status: str
    particular: list | None = None
    nullspace: list = field(default_factory=list)


def fraction_free_solve(matrix, rhs) -> LinearSolution:
    """Solve A x = b exactly; entries may be MPoly, int, or Fraction.

    Degenerate parametric corner cases (a pivot candidate that vanishes for
    special parameter values) are resolved generically: pivots are nonzero
    as polynomials.
    """
    a = [[_coerce_poly(e) for e in row] for row in matrix]
    b = [_coerce_poly(e) for e in rhs]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    if len(b) != nrows:
        raise ValueError("rhs length mismatch")
    aug = [row + [b[i]] for i, row in enumerate(a)]

    def strip_row(row):
        g = MPoly.zero()
        for e in row:
            g = poly_gcd(g, e)
            if g == MPoly.one():
                return row
        if g.is_zero or g == MPoly.one():
            return row
        return [e.divexact(g) for e in row]

    pivots = []  # (row, col)
    prow = 0
    for col in range(ncols):
        best = None
        for r in range(prow, nrows):
            if not aug[r][col].is_zero:
                sz = len(aug[r][col].terms)
                if best is None or sz < best[1]:
                    best = (r, sz)
        if best is None:
            continue
        r0 = best[0]
        aug[prow], aug[r0] = aug[r0], aug[prow]
        piv = aug[prow][col]
        for r in range(nrows):
            if r == prow or aug[r][col].is_zero:
                continue
            f = aug[r][col]
            aug[r] = [piv * aug[r][c] - f * aug[prow][c] for c in range(ncols + 1)]
            aug[r] = strip_row(aug[r])
        pivots.append((prow, col))
        prow += 1
        if prow == nrows:
            break

    for r in range(nrows):
        if all(aug[r][c].is_zero for c in range(ncols)) and not aug[r][ncols].is_zero:
            return LinearSolution(INCONSISTENT)

    pivot_cols = {c: r for r, c in pivots}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]

    def back_solve(rhs_col, free_values):
        sol = [RatFunc.const(0)] * ncols
        for c, val in free_values.items():
            sol[c] = val
        for r, c in reversed(pivots):
            acc = RatFunc(rhs_col[r])
            for c2 in range(c + 1, ncols):
                if not aug[r][c2].is_zero:
                    acc = acc - RatFunc(aug[r][c2]) * sol[c2]
            sol[c] = acc / RatFunc(aug[r][c])
        return sol

    particular = back_solve([aug[r][ncols] for r in range(nrows)], {c: RatFunc.const(0) for c in free_cols})
    nullspace = []
    zero_rhs = [MPoly.zero()] * nrows
    for fc in free_cols:
        fv = {c: RatFunc.const(1 if c == fc else 0) for c in free_cols}
        nullspace.append(back_solve(zero_rhs, fv))

    status = UNIQUE if not free_cols else PARAMETRIC
    return LinearSolution(status, particular, nullspace)
