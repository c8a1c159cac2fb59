"""Hypergeometric-term solutions of holonomic recurrences (Petkovsek's Hyper).

rec_hyper finds every rational function rho(n) such that a nonzero sequence
S with S(n+1) = rho(n) S(n) solves sum_j c_j(n) S(n+j) = 0.  Each candidate
ratio is written as z * A(n)/B(n) * c(n+1)/c(n) with A a monic divisor of
the trailing coefficient, B a monic divisor of the shifted leading
coefficient, z a nonzero rational, and c a nonzero polynomial; the algorithm
enumerates the finitely many (A, B, z) branches and solves for c by
degree-bounded linear algebra.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .factorize import factor_univariate, rational_roots
from .linalg import INCONSISTENT, fraction_free_solve
from .operators import Recurrence
from .poly import MPoly, RatFunc

__all__ = ["ParameterizedRecurrenceError", "rec_hyper", "ratio_solves"]


class ParameterizedRecurrenceError(ValueError):
    """Coefficients involve symbols other than the recurrence variable."""


def _monic_divisors(p: MPoly, v: str):
    """All monic divisors of p over Q, as MPoly in v (starting with 1)."""
    _, factors = factor_univariate(p, v)
    divisors = [MPoly.one()]
    for f, mult in factors:
        fm = f.monic(v)
        divisors = [d * fm ** e for d in divisors for e in range(mult + 1)]
    # dedupe (repeated irreducible factors can coincide after monicization)
    seen = {}
    for d in divisors:
        seen.setdefault(_key(d), d)
    return list(seen.values())


def _key(p: MPoly):
    return tuple(sorted(p.terms.items()))


def _z_candidates(polys, v):
    """Nonzero rational z with sum_i z^i lc(P_i) = 0 at the top degree."""
    m = max(p.degree(v) for p in polys)
    zvar = MPoly.var("_z")
    aux = MPoly.zero()
    for i, p in enumerate(polys):
        cs = p.coeffs_in(v)
        lead = cs.get(m, MPoly.zero())
        if not lead.is_zero:
            aux = aux + zvar ** i * lead.constant_value()
    return [z for z in rational_roots(aux, "_z") if z != 0]


def _poly_solutions(qs, v):
    """Nonzero polynomial solutions c of sum_i q_i(n) c(n+i) = 0.

    Returns a single representative c (lowest degree, content-free) or None.
    The degree bound comes from cancellation of the two top coefficients of
    the image: with q_i = a_i n^M + b_i n^(M-1) + ..., a nonzero solution of
    degree d forces sum a_i = 0 and sum (b_i + d i a_i) = 0.
    """
    M = max(q.degree(v) for q in qs)
    a = [q.coeffs_in(v).get(M, MPoly.zero()).constant_value() for q in qs]
    b = [q.coeffs_in(v).get(M - 1, MPoly.zero()).constant_value() if M >= 1
         else Fraction(0) for q in qs]
    if sum(a) != 0:
        return None
    s1 = sum(i * ai for i, ai in enumerate(a))
    s0 = sum(b)
    if s1 != 0:
        d = Fraction(-s0, s1)
        if d.denominator != 1 or d < 0:
            return None
        dmax = int(d)
    else:
        if s0 != 0:
            return None
        # fully degenerate leading behaviour: fall back to a small scan
        dmax = M + 8
    nv = MPoly.var(v)
    # a solution of any degree <= dmax lies in the nullspace of the
    # degree-dmax ansatz, so a single solve suffices
    cols = []
    for j in range(dmax + 1):
        img = MPoly.zero()
        for i, q in enumerate(qs):
            img = img + q * (nv + i) ** j
        cols.append(img.coeffs_in(v))
    maxdeg = max((max(c) for c in cols if c), default=0)
    matrix = [[c.get(deg, MPoly.zero()) for c in cols]
              for deg in range(maxdeg + 1)]
    sol = fraction_free_solve(matrix, [MPoly.zero()] * (maxdeg + 1))
    if sol.status == INCONSISTENT or not sol.nullspace:
        return None
    vec = sol.nullspace[0]
    c = MPoly.zero()
    for j, x in enumerate(vec):
        if not x.is_zero:
            c = c + nv ** j * x.constant_value()
    return c.primitive() if not c.is_zero else None


def ratio_solves(re: Recurrence, ratio: RatFunc) -> bool:
    """Exact check: S(n+j) = S(n) prod_{i<j} ratio(n+i) kills the recurrence."""
    v = re.var
    total = RatFunc.const(0)
    cumulative = RatFunc.const(1)
    for j, c in enumerate(re.coeffs):
        total = total + RatFunc(c) * cumulative
        cumulative = cumulative * RatFunc(ratio.num.shift(v, j),
                                          ratio.den.shift(v, j))
    return total.is_zero


def rec_hyper(re: Recurrence) -> list:
    """All term ratios S(n+1)/S(n) of hypergeometric solutions of re.

    The returned list is deterministic and duplicate-free; an empty list is
    a proof that no hypergeometric-term solution exists (up to the skipped
    irrational-z branches, which are reported as warnings).
    """
    v = re.var
    J = re.order
    if J < 1:
        raise ValueError("recurrence must have order >= 1")
    for c in re.coeffs:
        extra = set(c.compress().vars) - {v}
        if extra:
            raise ParameterizedRecurrenceError(
                f"parameterized coefficients are unsupported: {sorted(extra)}")
    c0, cJ = re.coeffs[0], re.coeffs[-1]
    if c0.is_zero:
        raise ValueError("trailing coefficient must be nonzero")
    found = {}
    for A in _monic_divisors(c0, v):
        for B in _monic_divisors(cJ.shift(v, J - 1), v):
            # P_i = c_i * prod_{j<i} A(n+j) * prod_{i<=j<J} B(n+j)
            polys = []
            for i in range(J + 1):
                p = re.coeffs[i]
                for j in range(i):
                    p = p * A.shift(v, j)
                for j in range(i, J):
                    p = p * B.shift(v, j)
                polys.append(p)
            zs = _z_candidates(polys, v)
            if _aux_has_irrational_roots(polys, v, zs):
                warnings.warn(
                    "skipping a branch with irrational ratio constant z; "
                    "algebraic extensions are unsupported", stacklevel=2)
            for z in zs:
                qs = [p * z ** i for i, p in enumerate(polys)]
                c = _poly_solutions(qs, v)
                if c is None:
                    continue
                ratio = (RatFunc.const(z) * RatFunc(A, B)
                         * RatFunc(c.shift(v, 1), c))
                if ratio_solves(re, ratio):
                    found.setdefault((_key(ratio.num), _key(ratio.den)), ratio)
    return sorted(found.values(), key=lambda r: (r.num.total_degree(),
                                                 str(r)))


def _aux_has_irrational_roots(polys, v, rational_zs) -> bool:
    """True when the z-equation has nonzero roots beyond the rational ones."""
    zvar = MPoly.var("_z")
    m = max(p.degree(v) for p in polys)
    aux = MPoly.zero()
    for i, p in enumerate(polys):
        lead = p.coeffs_in(v).get(m, MPoly.zero())
        if not lead.is_zero:
            aux = aux + zvar ** i * lead.constant_value()
    if aux.is_zero:
        return False
    # strip z = 0 roots and the known rational roots
    while aux.coeffs_in("_z").get(0, MPoly.zero()).is_zero and aux.degree("_z") > 0:
        aux = aux.divexact(zvar)
    for z in rational_zs:
        while True:
            q, ok = _try_div(aux, zvar - MPoly.const(z))
            if not ok:
                break
            aux = q
    return aux.degree("_z") > 0


def _try_div(p: MPoly, f: MPoly):
    try:
        return p.divexact(f), True
    except ValueError:
        return p, False
