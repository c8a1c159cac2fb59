"""Gosper's algorithm: hypergeometric antidifferences with certificates.

Given a term a(k) with rational shift ratio rho(k) = a(k+1)/a(k), find
s(k) = R(k) * a(k) with s(k+1) - s(k) = a(k), or prove that no
hypergeometric antidifference exists.  The ratio is first brought to the
form rho(k) = (p(k+1)/p(k)) * (q(k+1)/r(k+1)) with gcd(q(k), r(k+j)) = 1
for all j >= 0, then a polynomial f with

    p(k) = q(k+1) f(k) - r(k) f(k-1)

is sought by degree-bounded linear algebra, giving R(k) = r(k) f(k-1) / p(k).

Degree bound (the literature leaves this as "pure linear algebra"): write
A = q(k+1), B = r(k), C = p(k) and seek g = f(k-1) in A g(k+1) - B g(k) = C.
If deg A != deg B or lc A != lc B the top-degree term of the left side
cannot cancel, so deg g = deg C - max(deg A, deg B).  Otherwise the leading
terms cancel and deg g <= deg C - deg A + 1; when the next coefficient also
cancels, equating it to zero forces deg g = (B[N-1] - A[N-1]) / lc A, which
is admitted as a second candidate whenever it is a nonnegative integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import expr as E
from .expr import Expr
from .factorize import dispersion_set
from .hyperterm import term_ratio
from .linalg import INCONSISTENT, fraction_free_solve
from .poly import MPoly, RatFunc, poly_gcd


@dataclass
class GosperCertificate:
    p: MPoly
    q: MPoly
    r: MPoly
    f: RatFunc  # polynomial in k; coefficients rational in the parameters
    multiplier: RatFunc  # R(k) = r(k) f(k-1) / p(k)


@dataclass
class GosperResult:
    status: str  # "success" | "no_hypergeometric_antidifference"
    var: str
    ratio: RatFunc
    certificate: GosperCertificate | None = None
    antidifference: Expr | None = None


def _integer_scaled(num: MPoly, den: MPoly):
    """Scale num/den by a common constant: integer coefficients, coprime
    contents, positive leading coefficient on den."""
    from math import gcd as _g
    cn, cd = num.content(), den.content()
    # c = 1 / gcd(cn, cd) where gcd of fractions = gcd(nums) / lcm(dens)
    lden = cn.denominator * cd.denominator // _g(cn.denominator, cd.denominator)
    c = Fraction(lden, _g(cn.numerator, cd.numerator))
    num, den = num * c, den * c
    if den.leading_coeff() < 0:
        num, den = -num, -den
    return num, den


def gosper_pqr(ratio: RatFunc, k: str):
    """p, q, r with ratio = (p(k+1)/p(k)) (q(k+1)/r(k+1)) and empty dispersion."""
    u, v = _integer_scaled(ratio.num, ratio.den)
    q = u.shift(k, -1)
    r = v.shift(k, -1)
    p = MPoly.one()
    js = dispersion_set(q, r, k)
    for j in js:
        g = poly_gcd(q, r.shift(k, j))
        if g.is_constant:
            continue
        q = q.divexact(g)
        r = r.divexact(g.shift(k, -j))
        for i in range(j):
            p = p * g.shift(k, -i)
    return p, q, r


def degree_bound(p: MPoly, q: MPoly, r: MPoly, k: str) -> int:
    """Upper bound for deg f(k-1); -1 when no nonnegative degree is possible."""
    return degree_bound_from_deg(max(p.degree(k), 0), q, r, k)


def degree_bound_from_deg(kdeg: int, q: MPoly, r: MPoly, k: str) -> int:
    """Degree bound as above, given only the degree of the right-hand side.

    The candidate degrees are monotone in the right-hand-side degree, so an
    upper bound on that degree yields an upper bound on deg f.
    """
    a = q.shift(k, 1)
    b = r
    n = a.degree(k)
    m = b.degree(k)
    acs = a.coeffs_in(k)
    bcs = b.coeffs_in(k)
    candidates = []
    if n != m or acs.get(n, MPoly.zero()) != bcs.get(m, MPoly.zero()):
        candidates.append(kdeg - max(n, m))
    elif n == 0:
        candidates.extend([kdeg + 1, 0])
    else:
        candidates.append(kdeg - n + 1)
        lc = acs[n]
        delta = bcs.get(n - 1, MPoly.zero()) - acs.get(n - 1, MPoly.zero())
        # the extra candidate applies only if delta / lc is a plain integer
        ratio = RatFunc(delta, lc)
        if ratio.is_constant:
            val = ratio.constant_value()
            if val.denominator == 1 and val >= 0:
                candidates.append(int(val))
    valid = [d for d in candidates if isinstance(d, int) and d >= 0]
    return max(valid) if valid else -1


def solve_f(p: MPoly, q: MPoly, r: MPoly, k: str):
    """Find polynomial g (= f(k-1)) with q(k+1) g(k+1) - r(k) g(k) = p(k)."""
    d = degree_bound(p, q, r, k)
    if d < 0:
        return None
    a = q.shift(k, 1)
    kv = MPoly.var(k)
    # unknown coefficients g = sum c_i k^i; match powers of k
    # columns: c_0..c_d ; rows: powers of k
    cols = []
    for i in range(d + 1):
        contrib = a * (kv + 1) ** i - r * kv ** i
        cols.append(contrib.coeffs_in(k))
    maxdeg = max([p.degree(k)] + [max(c) if c else 0 for c in cols])
    matrix = []
    rhs = []
    pcs = p.coeffs_in(k)
    for deg in range(maxdeg + 1):
        matrix.append([c.get(deg, MPoly.zero()) for c in cols])
        rhs.append(pcs.get(deg, MPoly.zero()))
    sol = fraction_free_solve(matrix, rhs)
    if sol.status == INCONSISTENT:
        return None
    g = RatFunc.const(0)
    for i, c in enumerate(sol.particular):
        g = g + c * RatFunc(kv) ** i
    return g


def gosper_ratio(ratio: RatFunc, k: str):
    """Core routine on the ratio alone; returns a certificate or None."""
    p, q, r = gosper_pqr(ratio, k)
    g = solve_f(p, q, r, k)
    if g is None:
        return None
    multiplier = RatFunc(r) * g / RatFunc(p)
    f = g.shift(k, 1)
    cert = GosperCertificate(p, q, r, f, multiplier)
    # certificate identity: R(k+1) rho(k) - R(k) = 1
    if multiplier.shift(k, 1) * ratio - multiplier != RatFunc.const(1):
        raise AssertionError("antidifference certificate failed to verify")
    return cert


def gosper(e: Expr, k: str) -> GosperResult:
    """Decide existence of a hypergeometric antidifference of the term e."""
    ratio = term_ratio(e, k)
    cert = gosper_ratio(ratio, k)
    if cert is None:
        return GosperResult("no_hypergeometric_antidifference", k, ratio)
    anti = E.mul(E.from_ratfunc(cert.multiplier), e)
    return GosperResult("success", k, ratio, cert, anti)
