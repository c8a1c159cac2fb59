"""Hypergeometric terms: shift ratios, pFq summands, series-to-pFq conversion.

A hypergeometric term a(k) is one whose ratio a(k+1)/a(k) is a rational
function of k.  The ratio is extracted structurally: factorials, binomials,
Pochhammer symbols and gammas of arguments linear in k with integer slope,
powers with k-free base and linear exponent, and arbitrary rational factors.
Sums of terms with pairwise-rational quotients (e.g. F(n,k) - F(n-1,k)) are
handled by a gamma-atom decomposition.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import expr as E
from .expr import (
    Add, Binomial, Call, Expr, ExprList, Factorial, Gamma, Mul, Num,
    Pochhammer, Pow, Sym, to_string,
)
from .factorize import parametric_factor
from .poly import MPoly, RatFunc


class NotHypergeometricError(ValueError):
    pass


# ---------------------------------------------------------------------------
# hyperterm expansion and logarithmic derivatives
# ---------------------------------------------------------------------------


def expand_hyper(e: Expr) -> Expr:
    """Rewrite hyperterm([a..],[b..],z,k) calls into explicit products.

    hyperterm(upper, lower, z, k) denotes the k-th summand of the series
    with the given parameter lists:  prod (a)_k * z^k / (prod (b)_k * k!).
    The last argument may be any expression (e.g. k - j).
    """
    if isinstance(e, Call) and e.name == "hyperterm":
        if len(e.args) != 4 or not isinstance(e.args[0], ExprList) \
                or not isinstance(e.args[1], ExprList):
            raise NotHypergeometricError(
                "hyperterm expects (upper list, lower list, argument, index)")
        up, lo, arg, idx = e.args
        arg, idx = expand_hyper(arg), expand_hyper(idx)
        factors = [Pochhammer(expand_hyper(a), idx) for a in up.items]
        factors.append(E.pow_(arg, idx))
        inv = [Pochhammer(expand_hyper(b), idx) for b in lo.items]
        inv.append(Factorial(idx))
        return E.mul(*factors, E.pow_(E.mul(*inv), Num(-1)))
    if isinstance(e, Add):
        return E.add(*(expand_hyper(a) for a in e.args))
    if isinstance(e, Mul):
        return E.mul(*(expand_hyper(a) for a in e.args))
    if isinstance(e, Pow):
        return E.pow_(expand_hyper(e.base), expand_hyper(e.exponent))
    if isinstance(e, Factorial):
        return Factorial(expand_hyper(e.arg))
    if isinstance(e, Binomial):
        return Binomial(expand_hyper(e.top), expand_hyper(e.bottom))
    if isinstance(e, Pochhammer):
        return Pochhammer(expand_hyper(e.base), expand_hyper(e.count))
    if isinstance(e, Gamma):
        return Gamma(expand_hyper(e.arg))
    if isinstance(e, Call):
        return Call(e.name, tuple(expand_hyper(a) for a in e.args))
    if isinstance(e, ExprList):
        return ExprList(tuple(expand_hyper(a) for a in e.items))
    return e


def log_derivative(e: Expr, x: str) -> RatFunc:
    """(d/dx e) / e as a rational function, for hyperexponential factors."""
    if not E.contains(e, x):
        return RatFunc.const(0)
    try:
        r = E.to_ratfunc(e)
        return r.derivative(x) / r
    except E.NotRationalError:
        pass
    if isinstance(e, Mul):
        out = RatFunc.const(0)
        for a in e.args:
            out = out + log_derivative(a, x)
        return out
    if isinstance(e, Pow):
        if not E.contains(e.exponent, x):
            try:
                ex = E.to_ratfunc(e.exponent)
            except E.NotRationalError as exc:
                raise NotHypergeometricError(
                    f"exponent is not rational: {to_string(e.exponent)}") from exc
            return ex * log_derivative(e.base, x)
        raise NotHypergeometricError(
            f"{x}-dependent exponent is not hyperexponential: {to_string(e)}")
    if isinstance(e, Call) and e.name == "exp" and len(e.args) == 1:
        try:
            arg = E.to_ratfunc(e.args[0])
        except E.NotRationalError as exc:
            raise NotHypergeometricError(
                f"exponent is not rational: {to_string(e.args[0])}") from exc
        return arg.derivative(x)
    raise NotHypergeometricError(
        f"logarithmic derivative in {x} is not rational: {to_string(e)}")


# ---------------------------------------------------------------------------
# linear forms in k
# ---------------------------------------------------------------------------


def _linear_in(e: Expr, k: str):
    """Return (integer slope, offset RatFunc in the parameters) or raise."""
    try:
        r = E.to_ratfunc(e)
    except E.NotRationalError as exc:
        raise NotHypergeometricError(str(exc)) from exc
    if not r.is_polynomial():
        raise NotHypergeometricError(f"argument not polynomial in {k}: {to_string(e)}")
    p = r.as_poly()
    if p.degree(k) > 1:
        raise NotHypergeometricError(f"argument not linear in {k}: {to_string(e)}")
    cs = p.coeffs_in(k)
    slope_poly = cs.get(1, MPoly.zero())
    if not slope_poly.is_constant:
        raise NotHypergeometricError(f"slope depends on parameters: {to_string(e)}")
    slope = slope_poly.constant_value()
    if slope.denominator != 1:
        raise NotHypergeometricError(f"non-integer slope {slope} in {to_string(e)}")
    return int(slope), RatFunc(cs.get(0, MPoly.zero()))


# ---------------------------------------------------------------------------
# gamma-atom decomposition
# ---------------------------------------------------------------------------


@dataclass
class GammaForm:
    """e = coeff(k) * prod Gamma(s_i k + c_i)^{e_i} * prod base_j^{d_j k + f_j}.

    ``opaque`` collects k-free factors with no rational or gamma structure
    (e.g. exp(-t) when decomposing in k); they have shift ratio one and must
    cancel structurally in term quotients.
    """

    coeff: RatFunc
    gammas: list  # (slope: int, offset: RatFunc, exponent: int)
    powers: list  # (base: Expr, slope exponent in k: int, offset exponent: Expr)
    opaque: list = field(default_factory=list)  # (expr, exponent)


def _gamma_form(e: Expr, k: str, exponent: int = 1) -> GammaForm:
    try:
        r = E.to_ratfunc(e)
        return GammaForm(r ** exponent, [], [])
    except E.NotRationalError:
        pass
    if isinstance(e, Mul):
        out = GammaForm(RatFunc.const(1), [], [])
        for a in e.args:
            g = _gamma_form(a, k, exponent)
            out.coeff = out.coeff * g.coeff
            out.gammas += g.gammas
            out.powers += g.powers
            out.opaque += g.opaque
        return out
    if isinstance(e, Factorial):
        s, c = _linear_in(e.arg, k)
        return GammaForm(RatFunc.const(1), [(s, c + 1, exponent)], [])
    if isinstance(e, Gamma):
        s, c = _linear_in(e.arg, k)
        return GammaForm(RatFunc.const(1), [(s, c, exponent)], [])
    if isinstance(e, Binomial):
        top = _linear_in(e.top, k)
        bot = _linear_in(e.bottom, k)
        diff = (top[0] - bot[0], top[1] - bot[1])
        gammas = [
            (top[0], top[1] + 1, exponent),
            (bot[0], bot[1] + 1, -exponent),
            (diff[0], diff[1] + 1, -exponent),
        ]
        return GammaForm(RatFunc.const(1), gammas, [])
    if isinstance(e, Pochhammer):
        s0, c0 = _linear_in(e.base, k)
        s1, c1 = _linear_in(e.count, k)
        gammas = [
            (s0 + s1, c0 + c1, exponent),
            (s0, c0, -exponent),
        ]
        return GammaForm(RatFunc.const(1), gammas, [])
    if isinstance(e, Pow):
        if isinstance(e.exponent, Num) and e.exponent.value.denominator == 1:
            return _gamma_form(e.base, k, exponent * e.exponent.value.numerator)
        if not E.contains(e.base, k):
            s, c = _linear_in(e.exponent, k)
            off = E.mul(E.from_ratfunc(c * Fraction(exponent)))
            return GammaForm(RatFunc.const(1), [], [(e.base, s * exponent, off)])
        raise NotHypergeometricError(f"not a hypergeometric atom: {to_string(e)}")
    if not E.contains(e, k):
        return GammaForm(RatFunc.const(1), [], [], [(e, exponent)])
    raise NotHypergeometricError(f"not a hypergeometric atom: {to_string(e)}")


def term_ratio(e: Expr, k: str) -> RatFunc:
    """The forward shift ratio a(k+1)/a(k) as a reduced rational function."""
    if isinstance(e, Add):
        try:
            r = E.to_ratfunc(e)
            return r.shift(k, 1) / r
        except E.NotRationalError:
            pass
        first = e.args[0]
        rho0 = term_ratio(first, k)
        num = rho0
        den = RatFunc.const(1)
        for a in e.args[1:]:
            h = term_quotient(a, first, k)
            num = num + term_ratio(a, k) * h
            den = den + h
        if den.is_zero:
            raise NotHypergeometricError("sum of terms cancels identically")
        return num / den
    g = _gamma_form(e, k)

    # Collect the linear factors of the gamma shift quotients into a
    # multiset of primitive polynomials and cancel them structurally.
    # Multiplying the factors one rational operation at a time would reduce
    # with a multivariate gcd at every step, which is ruinous for many-
    # parameter terms; distinct primitive linear factors are coprime, so the
    # final product needs no reduction at all.
    factors = Counter()
    scalar = Fraction(1)

    def push(p: MPoly, ex: int):
        nonlocal scalar
        c = p.content()
        if p.leading_coeff() < 0:
            c = -c
        scalar *= c ** ex
        factors[p * (1 / c)] += ex

    kv = MPoly.var(k)
    for s, c, ex in g.gammas:
        # Gamma(v(k+1)) / Gamma(v(k)) for v = s*k + c is a product of |s|
        # linear factors v(k)+i (s > 0) or 1/(v(k)-i) (s < 0).
        base = kv * s + c.as_poly()
        if s >= 0:
            for i in range(s):
                push(base + i, ex)
        else:
            for i in range(1, -s + 1):
                push(base - i, -ex)
    for base, s, _off in g.powers:
        if s:
            try:
                b = E.to_ratfunc(base)
            except E.NotRationalError as exc:
                raise NotHypergeometricError(
                    f"power base is not rational: {to_string(base)}") from exc
            push(b.num, s)
            push(b.den, -s)

    cr = g.coeff.shift(k, 1) / g.coeff
    knum = MPoly.one()
    kden = MPoly.one()
    fnum = cr.num * scalar.numerator
    fden = cr.den * scalar.denominator
    for p, ex in factors.items():
        if p.degree(k) > 0:
            # primitive with k-degree 1 and constant k-slope: irreducible,
            # hence coprime to every other (distinct) factor
            if ex > 0:
                knum = knum * p ** ex
            else:
                kden = kden * p ** (-ex)
        else:
            if ex > 0:
                fnum = fnum * p ** ex
            else:
                fden = fden * p ** (-ex)
    free = RatFunc(fnum, fden)
    if free.num.degree(k) > 0 or free.den.degree(k) > 0:
        # a k-dependent coefficient part may share factors with the gamma
        # factors, so fall back to a full reduction
        return RatFunc(knum * free.num, kden * free.den)
    return RatFunc(knum * free.num, kden * free.den, _reduced=True)


def term_quotient(e1: Expr, e2: Expr, k: str) -> RatFunc:
    """e1/e2 as a rational function of k, via matched gamma atoms."""
    g1 = _gamma_form(e1, k)
    g2 = _gamma_form(e2, k)
    out = g1.coeff / g2.coeff
    atoms = list(g1.gammas) + [(s, c, -ex) for s, c, ex in g2.gammas]

    # group atoms whose arguments differ by integers; within a group the
    # gamma parts must cancel, leaving a rational product
    groups = []
    for s, c, ex in atoms:
        for grp in groups:
            gs, gc = grp[0][0], grp[0][1]
            if gs == s and _integer_difference(c, gc) is not None:
                grp.append((s, c, ex))
                break
        else:
            groups.append([(s, c, ex)])
    kv = RatFunc.var(k)
    for grp in groups:
        if sum(ex for _, _, ex in grp) != 0:
            raise NotHypergeometricError("gamma atoms do not cancel in the quotient")
        ref = min(grp, key=lambda a: _integer_difference(a[1], grp[0][1]))
        rs, rc, _ = ref
        for s, c, ex in grp:
            d = _integer_difference(c, rc)
            # Gamma(v + d) = Gamma(v) * prod_{i=0}^{d-1} (v + i), v = s k + rc
            v = kv * s + rc
            for i in range(d):
                out = out * (v + i) ** ex

    pows = list(g1.powers) + [(b, -s, E.neg(off)) for b, s, off in g2.powers]
    bygroup = {}
    for b, s, off in pows:
        key = to_string(b)
        acc = bygroup.setdefault(key, [b, 0, E.Num(0)])
        acc[1] += s
        acc[2] = E.add(acc[2], off)
    for b, s, off in bygroup.values():
        try:
            offr = E.to_ratfunc(off)
        except E.NotRationalError as exc:
            raise NotHypergeometricError(str(exc)) from exc
        if s == 0 and offr.is_zero:
            continue
        if s != 0:
            raise NotHypergeometricError(
                f"power of {to_string(b)} with k-dependent exponent survives the quotient")
        # k-free leftover exponent: only exact integers can be folded in
        if not offr.is_constant or offr.constant_value().denominator != 1:
            raise NotHypergeometricError(
                f"irrational power leftover {to_string(b)}^{to_string(off)}")
        try:
            out = out * E.to_ratfunc(b) ** int(offr.constant_value())
        except E.NotRationalError as exc:
            raise NotHypergeometricError(str(exc)) from exc

    # opaque k-free factors (e.g. exp(-t)) must cancel exactly
    residue = {}
    for expr, ex in g1.opaque:
        residue[to_string(expr)] = residue.get(to_string(expr), 0) + ex
    for expr, ex in g2.opaque:
        residue[to_string(expr)] = residue.get(to_string(expr), 0) - ex
    for key, ex in residue.items():
        if ex:
            raise NotHypergeometricError(
                f"factor {key} does not cancel in the quotient")
    return out


def _integer_difference(a: RatFunc, b: RatFunc):
    d = a - b
    if d.is_constant:
        v = d.constant_value()
        if v.denominator == 1:
            return int(v)
    return None


# ---------------------------------------------------------------------------
# HyperTerm and pFq
# ---------------------------------------------------------------------------


@dataclass
class HyperTerm:
    """A term a(k) represented by its shift ratio and a displayable form."""

    var: str
    ratio: RatFunc
    display: Expr

    @staticmethod
    def from_expr(e: Expr, k: str) -> "HyperTerm":
        return HyperTerm(k, term_ratio(e, k), e)


@dataclass
class PFQ:
    upper: list
    lower: list
    argument: Expr
    prefactor: Expr

    def __str__(self):
        up = ",".join(to_string(a) for a in self.upper)
        lo = ",".join(to_string(b) for b in self.lower)
        body = f"hypergeom([{up}],[{lo}],{to_string(self.argument)})"
        if isinstance(self.prefactor, Num) and self.prefactor.value == 1:
            return body
        return f"{to_string(self.prefactor)}*{body}"


def pfq_term(upper, lower, arg: Expr, k: str) -> HyperTerm:
    """The summand A_k of the hypergeometric series with the given data."""
    kv = RatFunc.var(k)
    ratio = E.to_ratfunc(arg)
    for a in upper:
        ratio = ratio * (kv + E.to_ratfunc(a))
    for b in lower:
        ratio = ratio / (kv + E.to_ratfunc(b))
    ratio = ratio / (kv + 1)
    factors = []
    for a in upper:
        factors.append(Pochhammer(a, Sym(k)))
    factors.append(Pow(arg, Sym(k)))
    inv = []
    for b in lower:
        inv.append(Pochhammer(b, Sym(k)))
    inv.append(Factorial(Sym(k)))
    display = E.mul(*factors, E.pow_(E.mul(*inv), Num(-1)))
    return HyperTerm(k, ratio, display)


# ---------------------------------------------------------------------------
# Sumtohyper
# ---------------------------------------------------------------------------


def eval_term_at_int(e: Expr, k: str, k0: int) -> Expr:
    """Substitute k = k0 and collapse discrete atoms with integer counts."""
    return _collapse(E.subs(e, {k: Num(k0)}))


def _collapse(e: Expr) -> Expr:
    if isinstance(e, (Num, Sym)):
        return e
    if isinstance(e, Add):
        return E.add(*(_collapse(a) for a in e.args))
    if isinstance(e, Mul):
        return E.mul(*(_collapse(a) for a in e.args))
    if isinstance(e, Pow):
        return E.pow_(_collapse(e.base), _collapse(e.exponent))
    if isinstance(e, Factorial):
        a = _collapse(e.arg)
        if isinstance(a, Num) and a.value.denominator == 1 and a.value >= 0:
            import math
            return Num(math.factorial(a.value.numerator))
        return Factorial(a)
    if isinstance(e, Binomial):
        top, bot = _collapse(e.top), _collapse(e.bottom)
        if isinstance(bot, Num) and bot.value.denominator == 1:
            j = bot.value.numerator
            if j < 0:
                return Num(0)
            import math
            out = Num(Fraction(1, math.factorial(j)))
            prod = [out]
            for i in range(j):
                prod.append(E.add(top, Num(-i)))
            return E.mul(*prod)
        return Binomial(top, bot)
    if isinstance(e, Pochhammer):
        base, cnt = _collapse(e.base), _collapse(e.count)
        if isinstance(cnt, Num) and cnt.value.denominator == 1 and cnt.value >= 0:
            prod = [Num(1)]
            for i in range(cnt.value.numerator):
                prod.append(E.add(base, Num(i)))
            return E.mul(*prod)
        return Pochhammer(base, cnt)
    if isinstance(e, Gamma):
        return Gamma(_collapse(e.arg))
    if isinstance(e, Call):
        return Call(e.name, tuple(_collapse(a) for a in e.args))
    return e


def _merge_powers(e: Expr) -> Expr:
    """Combine c1^u * c2^u -> (c1*c2)^u and c^(-u) -> (1/c)^u for display."""
    if not isinstance(e, Mul):
        return e
    plain = []
    byexp = {}
    for a in e.args:
        if isinstance(a, Pow) and not isinstance(a.exponent, Num):
            x = a.exponent
            negx = E.neg(x)
            if E._key(negx) < E._key(x) and isinstance(a.base, Num):
                # fold c^(-u) into (1/c)^u
                x = negx
                a = Pow(Num(1 / a.base.value), x)
            byexp.setdefault(E._key(x), [x, []])[1].append(a.base)
        else:
            plain.append(a)
    for x, bases in byexp.values():
        if len(bases) == 1:
            plain.append(Pow(bases[0], x))
        else:
            merged = bases[0]
            for b in bases[1:]:
                merged = _expand_product(merged, b)
            plain.append(Pow(merged, x))
    return E.mul(*plain)


def _expand_product(a: Expr, b: Expr) -> Expr:
    try:
        return E.from_ratfunc(E.to_ratfunc(a) * E.to_ratfunc(b))
    except E.NotRationalError:
        return E.mul(a, b)


def _linear_factor_params(p: MPoly, k: str):
    """Split p into z * prod (k + a_i) with a_i rational in the parameters."""
    unit, factors = parametric_factor(p, k)
    z = RatFunc.const(unit)
    shifts = []
    for f, m in factors:
        d = f.degree(k)
        if d == 0:
            z = z * RatFunc(f) ** m
            continue
        if d != 1:
            raise NotHypergeometricError(
                f"nonlinear irreducible factor in the term ratio: {f}")
        cs = f.coeffs_in(k)
        slope = cs[1]
        if not slope.is_constant:
            raise NotHypergeometricError(f"parameter-dependent slope in {f}")
        s = slope.constant_value()
        a = RatFunc(cs.get(0, MPoly.zero())) / s
        for _ in range(m):
            shifts.append(a)
            z = z * s
    return z, shifts


def sum_to_hyper(e: Expr, k: str) -> PFQ:
    """Convert sum_k e(k) into prefactor * hypergeom(upper, lower, argument)."""
    from .factorize import nonneg_integer_roots

    rho = term_ratio(e, k)

    # lowest nonzero support: a pole of the ratio at j >= 0 means the term
    # vanishes at j and the support starts above it
    k0 = 0
    if rho.den.degree(k) > 0:
        roots = nonneg_integer_roots(_param_free_part(rho.den, k), k)
        if roots:
            k0 = max(roots) + 1

    shifted = rho.shift(k, k0)
    zn, upper = _linear_factor_params(shifted.num, k)
    zd, lower = _linear_factor_params(shifted.den, k)
    if not any(b == RatFunc.const(1) for b in lower):
        upper.append(RatFunc.const(1))
    else:
        lower.remove(RatFunc.const(1))
    arg = E.from_ratfunc(zn / zd)
    prefactor = _merge_powers(eval_term_at_int(e, k, k0))
    upper_e = sorted((E.from_ratfunc(a) for a in upper), key=to_string)
    lower_e = sorted((E.from_ratfunc(b) for b in lower), key=to_string)
    return PFQ(upper_e, lower_e, arg, prefactor)


def _param_free_part(p: MPoly, k: str):
    """Product of the factors of p that involve only k."""
    unit, factors = parametric_factor(p, k)
    out = MPoly.one()
    for f, m in factors:
        if f.compress().vars == (k,):
            out = out * f ** m
    return out
