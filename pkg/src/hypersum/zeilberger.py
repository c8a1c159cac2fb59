"""Creative telescoping for definite hypergeometric sums and integrals.

sum_recursion finds a holonomic recurrence for s(n) = sum_k F(n,k): it seeks
sigma_1..sigma_J and G(n,k) = R(n,k) F(n,k) with

    G(n,k+1) - G(n,k) = F(n,k) + sum_j sigma_j(n) F(n+j,k),

so summing over k kills the left side and yields the recurrence.  The sigma_j
and the Gosper-style numerator polynomial are found from one combined linear
system, iterating J = 1, 2, ... until it becomes solvable.

sum_diffeq is the continuous-parameter analogue (derivatives in x instead of
shifts in n); int_recursion telescopes d/dt instead of the k-shift, producing
recurrences for parametric definite integrals.
"""

from __future__ import annotations

import random

from dataclasses import dataclass, field
from fractions import Fraction

from . import expr as E
from .expr import Expr, Factorial, Num, Pochhammer, Sym
from .gosper import degree_bound_from_deg, gosper_pqr
from .hyperterm import (
    NotHypergeometricError, eval_term_at_int, expand_hyper, log_derivative,
    term_quotient, term_ratio, _linear_factor_params,
)
from .linalg import INCONSISTENT, fraction_free_solve
from .operators import DiffEq, Recurrence, normalize_coefficients
from .poly import MPoly, RatFunc, poly_lcm

DEFAULT_ORDER_MAX = 6


class NoRecurrenceError(ValueError):
    """No telescoping recurrence was found up to the requested order."""

    def __init__(self, order_max):
        self.order_max = order_max
        super().__init__(f"no recurrence of order <= {order_max} found")


class NoDiffEqError(ValueError):
    """No telescoping differential equation up to the requested order."""

    def __init__(self, order_max):
        self.order_max = order_max
        super().__init__(f"no differential equation of order <= {order_max} found")


class OrderNotOneError(ValueError):
    """closedform needs a first-order recurrence; the one found is carried."""

    def __init__(self, recurrence):
        self.recurrence = recurrence
        super().__init__(
            f"the minimal recurrence has order {recurrence.order} > 1")


class DegenerateIntegrandError(ValueError):
    pass


def _eval_rf(rf: RatFunc, pt) -> Fraction:
    return rf.num.eval(pt) / rf.den.eval(pt)


def _all_vars(*objs) -> list:
    out = set()
    for o in objs:
        polys = (o.num, o.den) if isinstance(o, RatFunc) else (o,)
        for p in polys:
            out.update(v for v in p.vars if p.degree(v) > 0)
    return sorted(out)


def _holds_at_random_points(check, variables, trials: int = 3) -> bool:
    """Run a pointwise identity check at several random rational points.

    Points where a denominator vanishes are redrawn.  Distinct large random
    points make a false pass vanishingly unlikely for the fixed-degree
    rational identities checked here.
    """
    rng = random.Random(0xCE57)
    passed = attempts = 0
    while passed < trials and attempts < 50 * trials:
        attempts += 1
        pt = {v: Fraction(rng.randrange(10 ** 3, 10 ** 6)) for v in variables}
        try:
            if not check(pt):
                return False
        except ZeroDivisionError:
            continue
        passed += 1
    return passed == trials


@dataclass
class TelescopingCertificate:
    """G = multiplier * F with Delta_k G = F + sum_j sigma_j * (shifted F)."""

    sigma: list  # RatFunc, sigma_1..sigma_J
    multiplier: RatFunc


def _parameterized_telescope(rho: RatFunc, us: list, u: MPoly, k: str):
    """Solve R(k+1) rho(k) - R(k) = (u_0 + sum_j sigma_j u_j) / u.

    ``us`` holds the numerator polynomials u_0..u_J over the common
    denominator u.  Returns (sigmas, R) or None.  The telescoped term
    b(k) = F(k) (u_0 + sum sigma_j u_j)/u has shift ratio
    rho * u(k)/u(k+1) * t(k+1)/t(k), so Gosper's p/q/r decomposition of the
    sigma-free part combines with the unknown t into p = p0 * t, and the
    Gosper equation q(k+1) g(k+1) - r(k) g(k) = p0 * t is linear in the
    coefficients of g and the sigma_j together.
    """
    ratio2 = rho * RatFunc(u) / RatFunc(u.shift(k, 1))
    p0, q, r = gosper_pqr(ratio2, k)
    kmax = p0.degree(k) + max(uj.degree(k) for uj in us)
    d = degree_bound_from_deg(kmax, q, r, k)
    if d < 0:
        return None
    a = q.shift(k, 1)
    kv = MPoly.var(k)
    cols = []
    for i in range(d + 1):
        cols.append((a * (kv + 1) ** i - r * kv ** i).coeffs_in(k))
    for uj in us[1:]:
        cols.append((-(p0 * uj)).coeffs_in(k))
    rhs_poly = (p0 * us[0]).coeffs_in(k)
    maxdeg = max([max(rhs_poly, default=0)] + [max(c) if c else 0 for c in cols])
    matrix = []
    rhs = []
    for deg in range(maxdeg + 1):
        matrix.append([c.get(deg, MPoly.zero()) for c in cols])
        rhs.append(rhs_poly.get(deg, MPoly.zero()))
    sol = fraction_free_solve(matrix, rhs)
    if sol.status == INCONSISTENT:
        return None
    g = RatFunc.const(0)
    for i in range(d + 1):
        g = g + sol.particular[i] * RatFunc(kv) ** i
    sigmas = sol.particular[d + 1:]
    multiplier = RatFunc(r) * g / (RatFunc(p0) * RatFunc(u))

    # certificate identity R(k+1) rho - R = (u_0 + sum sigma_j u_j)/u,
    # checked on every success at random points (a symbolic check would
    # redo the most expensive arithmetic of the whole computation)
    def check(pt):
        pt1 = dict(pt)
        pt1[k] = pt[k] + 1
        lhs = _eval_rf(multiplier, pt1) * _eval_rf(rho, pt) \
            - _eval_rf(multiplier, pt)
        rhs = us[0].eval(pt)
        for s, uj in zip(sigmas, us[1:]):
            rhs += _eval_rf(s, pt) * uj.eval(pt)
        return lhs == rhs / u.eval(pt)

    if not _holds_at_random_points(check, _all_vars(multiplier, rho, u, *us)):
        raise AssertionError("telescoping certificate failed to verify")
    return sigmas, multiplier


def _common_numerators(quotients):
    """Common denominator u and numerators u_j with quotient_j = u_j / u."""
    u = MPoly.one()
    for qt in quotients:
        u = poly_lcm(u, qt.den)
    # qt.den divides u by construction, so each numerator is exact
    us = [qt.num * u.divexact(qt.den) for qt in quotients]
    return us, u


def sum_recursion(e: Expr, k: str, n: str, order_max: int = DEFAULT_ORDER_MAX,
                  func: str = "S"):
    """Holonomic recurrence in n for sum_k e(n,k), with its certificate."""
    e = expand_hyper(e)
    rho = term_ratio(e, k)
    quotients = [RatFunc.const(1)]
    nv = Sym(n)
    for j in range(1, order_max + 1):
        shifted = E.subs(e, {n: E.add(nv, Num(j))})
        quotients.append(term_quotient(shifted, e, k))
        us, u = _common_numerators(quotients)
        found = _parameterized_telescope(rho, us, u, k)
        if found is None:
            continue
        sigmas, multiplier = found
        coeffs = normalize_coefficients([RatFunc.const(1)] + list(sigmas))
        rec = Recurrence(func, n, coeffs)
        return rec, TelescopingCertificate(list(sigmas), multiplier)
    raise NoRecurrenceError(order_max)


# ---------------------------------------------------------------------------
# closed forms of first-order recurrences
# ---------------------------------------------------------------------------


def _direct_sum(e: Expr, k: str, bindings, cap: int = 60) -> Expr:
    """sum_k e with the given substitutions, over the natural support from 0.

    Terms are collapsed symbolically; summation stops at the first term that
    collapses to zero (terminating series).
    """
    e0 = E.subs(e, bindings)
    total = Num(0)
    for j in range(cap):
        t = eval_term_at_int(e0, k, j)
        if isinstance(t, Num) and t.value == 0:
            return total
        total = E.add(total, t)
    raise NotHypergeometricError(
        f"series does not terminate within {cap} terms")


def closedform(e: Expr, k: str, n: str, order_max: int = DEFAULT_ORDER_MAX) -> Expr:
    """Hypergeometric term representing sum_k e(n,k), via a first-order
    recurrence: the term ratio is split into Pochhammer quotients."""
    from .factorize import nonneg_integer_roots
    from .hyperterm import _param_free_part

    e = expand_hyper(e)
    rec, _cert = sum_recursion(e, k, n, order_max)
    if rec.order != 1:
        raise OrderNotOneError(rec)
    ratio = -RatFunc(rec.coeffs[0]) / RatFunc(rec.coeffs[1])

    n0 = 0
    if rec.coeffs[1].degree(n) > 0:
        roots = nonneg_integer_roots(_param_free_part(rec.coeffs[1], n), n)
        if roots:
            n0 = max(roots) + 1
    s0 = _direct_sum(e, k, {n: Num(n0)})
    return _assemble_product(ratio, n, n0, s0)


def _assemble_product(ratio: RatFunc, n: str, n0: int, s0: Expr) -> Expr:
    """s(n) = s(n0) * prod_{i=n0}^{n-1} ratio(i) as Pochhammer quotients."""
    from collections import Counter
    from fractions import Fraction

    zn, upper = _linear_factor_params(ratio.shift(n, n0).num, n)
    zd, lower = _linear_factor_params(ratio.shift(n, n0).den, n)
    z = zn / zd
    cu, cl = Counter(upper), Counter(lower)
    common = cu & cl
    cu -= common
    cl -= common

    m = Sym(n) if n0 == 0 else E.add(Sym(n), Num(-n0))
    num = Counter()
    den = Counter()
    # duplication: (1/2)_m * 4^m = (2m)! / m!
    half = RatFunc.const(Fraction(1, 2))
    while cu[half] > 0 and z.is_constant and (z.constant_value() / 4).denominator == 1:
        cu[half] -= 1
        z = z / 4
        num[Factorial(E.mul(Num(2), m))] += 1
        den[Factorial(m)] += 1
    for a, cnt in sorted(cu.items(), key=str):
        num[_poch_display(a, m)] += cnt
    for b, cnt in sorted(cl.items(), key=str):
        den[_poch_display(b, m)] += cnt

    factors = []
    if not (isinstance(s0, Num) and s0.value == 1):
        factors.append(s0)
    if z != RatFunc.const(1):
        factors.append(E.pow_(E.from_ratfunc(z), m))
    for f, cnt in num.items():
        if cnt:
            factors.append(f if cnt == 1 else E.pow_(f, Num(cnt)))
    for f, cnt in den.items():
        if cnt:
            factors.append(E.pow_(f, Num(-cnt)))
    return E.mul(Num(1), *factors)


def _poch_display(base: RatFunc, count: Expr) -> Expr:
    if base == RatFunc.const(1):
        return Factorial(count)
    return Pochhammer(E.from_ratfunc(base), count)


# ---------------------------------------------------------------------------
# differential equations for sums
# ---------------------------------------------------------------------------


def sum_diffeq(e: Expr, k: str, x: str, order_max: int = DEFAULT_ORDER_MAX,
               func: str = "F"):
    """Holonomic differential equation in x for sum_k e(x,k)."""
    e = expand_hyper(e)
    rho = term_ratio(e, k)
    lder = log_derivative(e, x)
    ws = [RatFunc.const(1)]
    for j in range(1, order_max + 1):
        ws.append(ws[-1].derivative(x) + ws[-1] * lder)
        us, u = _common_numerators(ws)
        found = _parameterized_telescope(rho, us, u, k)
        if found is None:
            continue
        sigmas, multiplier = found
        coeffs = normalize_coefficients([RatFunc.const(1)] + list(sigmas))
        de = DiffEq(func, x, coeffs)
        return de, TelescopingCertificate(list(sigmas), multiplier)
    raise NoDiffEqError(order_max)


# ---------------------------------------------------------------------------
# recurrences for parametric definite integrals
# ---------------------------------------------------------------------------


@dataclass
class IntRecursionResult:
    recurrence: Recurrence
    certificate: TelescopingCertificate
    note: str = field(
        default="boundary terms of the antiderivative are assumed to vanish")


def _continuous_telescope(lder: RatFunc, us: list, u: MPoly, t: str):
    """Solve R'(t) + R(t) lder = (u_0 + sum_j sigma_j u_j) / u for rational R.

    The denominator of R is bounded by u * den(lder)^i; the numerator degree
    by a generous structural bound, so the remaining work is one linear solve
    per denominator candidate.
    """
    b = lder.den
    a = lder.num
    maxu = max(uj.degree(t) for uj in us)
    base = poly_lcm(u, b)
    for power in range(1, 4):
        dpoly = base * b ** (power - 1)
        dprime = dpoly.derivative(t)
        ybound = dpoly.degree(t) + b.degree(t) + maxu + 2
        # u b (Y' D - Y D') + u a D Y = D^2 b (u_0 + sum sigma_j u_j)
        tv = MPoly.var(t)
        cols = []
        for i in range(ybound + 1):
            ypow = tv ** i
            yder = ypow.derivative(t)
            contrib = u * b * (yder * dpoly - ypow * dprime) + u * a * dpoly * ypow
            cols.append(contrib.coeffs_in(t))
        lead = dpoly * dpoly * b
        for uj in us[1:]:
            cols.append((-(lead * uj)).coeffs_in(t))
        rhs_poly = (lead * us[0]).coeffs_in(t)
        maxdeg = max([max(rhs_poly, default=0)] + [max(c) if c else 0 for c in cols])
        matrix = []
        rhs = []
        for deg in range(maxdeg + 1):
            matrix.append([c.get(deg, MPoly.zero()) for c in cols])
            rhs.append(rhs_poly.get(deg, MPoly.zero()))
        sol = fraction_free_solve(matrix, rhs)
        if sol.status == INCONSISTENT:
            continue
        y = RatFunc.const(0)
        for i in range(ybound + 1):
            y = y + sol.particular[i] * RatFunc(tv) ** i
        sigmas = sol.particular[ybound + 1:]
        multiplier = y / RatFunc(dpoly)

        # certificate identity R' + R L = (u_0 + sum sigma_j u_j)/u at
        # random points; R' is evaluated through the quotient rule so the
        # symbolic derivative is never formed
        mn, md = multiplier.num, multiplier.den
        mnd, mdd = mn.derivative(t), md.derivative(t)

        def check(pt):
            den = md.eval(pt)
            rval = mn.eval(pt) / den
            rder = (mnd.eval(pt) * den - mn.eval(pt) * mdd.eval(pt)) / den ** 2
            lhs = rder + rval * _eval_rf(lder, pt)
            rhs = us[0].eval(pt)
            for s, uj in zip(sigmas, us[1:]):
                rhs += _eval_rf(s, pt) * uj.eval(pt)
            return lhs == rhs / u.eval(pt)

        if not _holds_at_random_points(check, _all_vars(multiplier, lder, u, *us)):
            raise AssertionError("antiderivative certificate failed to verify")
        return sigmas, multiplier
    return None


def int_recursion(e: Expr, t: str, k: str, order_max: int = DEFAULT_ORDER_MAX,
                  func: str = "B") -> IntRecursionResult:
    """Recurrence in k for B(k) = int e(t,k) dt, certified by an
    antiderivative G = multiplier * e with dG/dt = e + sum sigma_j e(k+j)."""
    e = expand_hyper(e)
    lder = log_derivative(e, t)
    quotients = [RatFunc.const(1)]
    kv = Sym(k)
    for j in range(1, order_max + 1):
        shifted = E.subs(e, {k: E.add(kv, Num(j))})
        quotients.append(term_quotient(shifted, e, k))
        if j == 1 and quotients[1] == RatFunc.const(1):
            raise DegenerateIntegrandError(
                f"integrand does not depend on {k}: no nontrivial recurrence")
        us, u = _common_numerators(quotients)
        found = _continuous_telescope(lder, us, u, t)
        if found is None:
            continue
        sigmas, multiplier = found
        coeffs = normalize_coefficients([RatFunc.const(1)] + list(sigmas))
        rec = Recurrence(func, k, coeffs)
        return IntRecursionResult(rec, TelescopingCertificate(list(sigmas), multiplier))
    raise NoRecurrenceError(order_max)
