"""Sparse multivariate polynomials and reduced rational functions over Q.

MPoly is the coefficient workhorse for every algorithm in the package:
a mapping from exponent vectors to nonzero Fractions, over a canonical
(sorted) tuple of variable names.  RatFunc is a reduced fraction of two
MPoly and models the field Q(params)(k).
"""

from __future__ import annotations

import heapq
import random

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


def _grlex_key(exp):
    return (sum(exp), exp)


class MPoly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Variables are kept as a sorted tuple of names; arithmetic between
    polynomials over different variable sets aligns them automatically.
    Instances are treated as immutable.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, Scalar]):
        vs = tuple(variables)
        if list(vs) != sorted(vs):
            raise ValueError("variable list must be sorted")
        tm = {}
        for exp, c in terms.items():
            c = _as_fraction(c)
            if c:
                if len(exp) != len(vs):
                    raise ValueError("exponent arity mismatch")
                tm[tuple(exp)] = c
        self.vars = vs
        self.terms = tm
        self._hash = None

    # -- construction -------------------------------------------------

    @staticmethod
    def const(c: Scalar) -> "MPoly":
        c = _as_fraction(c)
        return MPoly((), {(): c} if c else {})

    @staticmethod
    def var(name: str) -> "MPoly":
        return MPoly((name,), {(1,): Fraction(1)})

    zero_cache = None

    @staticmethod
    def zero() -> "MPoly":
        if MPoly.zero_cache is None:
            MPoly.zero_cache = MPoly((), {})
        return MPoly.zero_cache

    @staticmethod
    def one() -> "MPoly":
        return MPoly.const(1)

    @staticmethod
    def from_univariate(name: str, coeffs: Iterable[Scalar]) -> "MPoly":
        """Build a univariate polynomial from a low-to-high coefficient list."""
        return MPoly((name,), {(i,): c for i, c in enumerate(coeffs)})

    # -- alignment ----------------------------------------------------

    def with_vars(self, vs: tuple) -> "MPoly":
        """Re-embed into the (sorted) superset variable tuple ``vs``."""
        if vs == self.vars:
            return self
        idx = [vs.index(v) for v in self.vars]
        n = len(vs)
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for i, e in zip(idx, exp):
                new[i] = e
            terms[tuple(new)] = c
        return MPoly(vs, terms)

    @staticmethod
    def _align(a: "MPoly", b: "MPoly"):
        if a.vars == b.vars:
            return a, b
        vs = tuple(sorted(set(a.vars) | set(b.vars)))
        return a.with_vars(vs), b.with_vars(vs)

    def compress(self) -> "MPoly":
        """Drop variables that no longer occur."""
        if not self.terms:
            return MPoly.zero()
        used = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        if len(used) == len(self.vars):
            return self
        vs = tuple(self.vars[i] for i in used)
        return MPoly(vs, {tuple(e[i] for i in used): c for e, c in self.terms.items()})

    # -- predicates / views -------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, v: str) -> int:
        """Degree in variable v (-1 for the zero polynomial, 0 if absent)."""
        if not self.terms:
            return -1
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        return max(e[i] for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def leading_coeff(self) -> Fraction:
        return self.leading()[1]

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        a, b = MPoly._align(self, other)
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return MPoly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return MPoly.const(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return MPoly.zero()
            return MPoly(self.vars, {e: k * c for e, k in self.terms.items()})
        a, b = MPoly._align(self, other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(exp, Fraction(0)) + c1 * c2
                if s:
                    terms[exp] = s
                else:
                    terms.pop(exp, None)
        return MPoly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of MPoly")
        result = MPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = MPoly._align(self.compress(), other.compress())
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            p = self.compress()
            self._hash = hash((p.vars, frozenset(p.terms.items())))
        return self._hash

    # -- substitution / evaluation ------------------------------------

    def subs(self, bindings: Mapping[str, "MPoly | Scalar"]) -> "MPoly":
        """Substitute polynomials (or scalars) for variables."""
        if not any(v in bindings for v in self.vars):
            return self
        vals = {}
        for v in self.vars:
            if v in bindings:
                b = bindings[v]
                vals[v] = b if isinstance(b, MPoly) else MPoly.const(b)
            else:
                vals[v] = MPoly.var(v)
        result = MPoly.zero()
        pow_cache = {v: {0: MPoly.one()} for v in self.vars}

        def vpow(v, e):
            cache = pow_cache[v]
            if e not in cache:
                cache[e] = vals[v] * vpow(v, e - 1)
            return cache[e]

        for exp, c in self.terms.items():
            term = MPoly.const(c)
            for v, e in zip(self.vars, exp):
                if e:
                    term = term * vpow(v, e)
            result = result + term
        return result

    def eval(self, bindings: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.vars if v not in bindings and self.degree(v) > 0]
        if missing:
            raise ValueError(f"unbound variables {missing}")
        vals = [_as_fraction(bindings.get(v, 0)) for v in self.vars]
        if all(f.denominator == 1 for f in vals):
            # integer point: clear coefficient denominators once and work in
            # plain int arithmetic, far cheaper than Fraction operations
            scale = 1
            for c in self.terms.values():
                scale = scale * c.denominator // int_gcd(scale, c.denominator)
            ivals = [f.numerator for f in vals]
            pows = [{0: 1} for _ in ivals]
            total = 0
            for exp, c in self.terms.items():
                val = c.numerator * (scale // c.denominator)
                for i, e in enumerate(exp):
                    if e:
                        cache = pows[i]
                        if e not in cache:
                            cache[e] = ivals[i] ** e
                        val *= cache[e]
                total += val
            return Fraction(total, scale)
        total = Fraction(0)
        for exp, c in self.terms.items():
            val = c
            for v, e in zip(self.vars, exp):
                if e:
                    val *= _as_fraction(bindings[v]) ** e
            total += val
        return total

    def shift(self, v: str, offset) -> "MPoly":
        """Substitute v -> v + offset (offset a scalar or MPoly)."""
        off = offset if isinstance(offset, MPoly) else MPoly.const(offset)
        return self.subs({v: MPoly.var(v) + off})

    def derivative(self, v: str) -> "MPoly":
        if v not in self.vars:
            return MPoly.zero()
        i = self.vars.index(v)
        terms = {}
        for exp, c in self.terms.items():
            if exp[i]:
                new = list(exp)
                new[i] -= 1
                terms[tuple(new)] = c * exp[i]
        return MPoly(self.vars, terms)

    # -- univariate views ----------------------------------------------

    def coeffs_in(self, v: str) -> dict:
        """View as univariate in v: {degree: MPoly coefficient in the rest}."""
        if v not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(v)
        rest = self.vars[:i] + self.vars[i + 1:]
        out = {}
        for exp, c in self.terms.items():
            d = exp[i]
            rexp = exp[:i] + exp[i + 1:]
            bucket = out.setdefault(d, {})
            bucket[rexp] = bucket.get(rexp, Fraction(0)) + c
        return {d: MPoly(rest, tm) for d, tm in out.items() if any(tm.values())}

    @staticmethod
    def from_coeffs_in(v: str, coeffs: Mapping[int, "MPoly"]) -> "MPoly":
        result = MPoly.zero()
        xv = MPoly.var(v)
        for d, c in coeffs.items():
            result = result + c * xv ** d
        return result

    def univariate_coeffs(self, v: str) -> list:
        """Dense low-to-high Fraction coefficient list; requires only var v."""
        p = self.compress()
        if p.vars not in ((), (v,)):
            raise ValueError(f"not univariate in {v}: vars {p.vars}")
        n = p.degree(v)
        out = [Fraction(0)] * (max(n, 0) + 1)
        for exp, c in p.terms.items():
            out[exp[0] if exp else 0] = c
        return out

    # -- content and normalization --------------------------------------

    def content(self) -> Fraction:
        """Positive rational content (gcd of coefficients), 0 for zero poly."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, c.numerator)
            den = den * c.denominator // int_gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MPoly":
        """Divide out rational content; leading (grlex) coefficient positive."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coeff() < 0:
            c = -c
        return self * (1 / c)

    def monic(self, v: str) -> "MPoly":
        cs = self.univariate_coeffs(v)
        return self * (1 / cs[-1])

    # -- division --------------------------------------------------------

    def divexact(self, other: "MPoly") -> "MPoly":
        """Exact division; raises ValueError if the division is not exact."""
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                raise ZeroDivisionError("division by zero polynomial")
            return self * (1 / c)
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant:
            return self * (1 / other.constant_value())
        a, b = MPoly._align(self, other)
        bexp, bc = b.leading()
        rem = dict(a.terms)
        q = {}
        # lazy max-heap of candidate leading exponents (grlex, negated for
        # heapq); stale entries are skipped when popped
        heap = [(-s, tuple(-x for x in e), e) for e in rem
                for s in (sum(e),)]
        heapq.heapify(heap)
        while rem:
            exp = None
            while heap:
                _, _, cand = heapq.heappop(heap)
                if cand in rem:
                    exp = cand
                    break
            if exp is None:
                raise ValueError("inexact polynomial division")
            c = rem[exp]
            qexp = tuple(x - y for x, y in zip(exp, bexp))
            if any(e < 0 for e in qexp):
                raise ValueError("inexact polynomial division")
            qc = c / bc
            q[qexp] = qc
            for e2, c2 in b.terms.items():
                tgt = tuple(x + y for x, y in zip(qexp, e2))
                s = rem.get(tgt, Fraction(0)) - qc * c2
                if s:
                    if tgt not in rem:
                        heapq.heappush(heap, (-sum(tgt), tuple(-x for x in tgt), tgt))
                    rem[tgt] = s
                else:
                    rem.pop(tgt, None)
        return MPoly(a.vars, q)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.divexact(self)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    # -- printing --------------------------------------------------------

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if not factors:
                body = str(abs(c))
            else:
                mono = "*".join(factors)
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# -- gcd machinery -------------------------------------------------------


def _uni(p: MPoly, v: str) -> dict:
    return p.coeffs_in(v)


def _uni_degree(u: dict) -> int:
    return max(u) if u else -1


def _uni_mul_poly(u: dict, g: MPoly) -> dict:
    return {d: c * g for d, c in u.items()}


def _uni_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for d, c in b.items():
        s = out.get(d, MPoly.zero()) - c
        if s.is_zero:
            out.pop(d, None)
        else:
            out[d] = s
    return out


def _uni_shift_mul(u: dict, k: int) -> dict:
    return {d + k: c for d, c in u.items()}


def _pseudo_rem(a: dict, b: dict) -> dict:
    """Pseudo-remainder of univariate polys with MPoly coefficients."""
    da, db = _uni_degree(a), _uni_degree(b)
    lb = b[db]
    r = dict(a)
    while _uni_degree(r) >= db and r:
        dr = _uni_degree(r)
        lead = r[dr]
        r = _uni_sub(_uni_mul_poly(r, lb), _uni_shift_mul(_uni_mul_poly(b, lead), dr - db))
    return r


def _coeff_gcd(coeffs) -> MPoly:
    g = MPoly.zero()
    for c in coeffs:
        g = poly_gcd(g, c)
        if g.is_constant and not g.is_zero:
            return MPoly.one()
    return g


def _eval_except(p: MPoly, v: str, point: Mapping[str, Fraction]) -> list:
    """Dense low-to-high coefficient list of p with every variable but v bound."""
    i = p.vars.index(v) if v in p.vars else -1
    out = [Fraction(0)] * (p.degree(v) + 1)
    for exp, c in p.terms.items():
        val = c
        for w, e in zip(p.vars, exp):
            if w != v and e:
                val *= point[w] ** e
        out[exp[i] if i >= 0 else 0] += val
    return out


def _uni_strip(u: list) -> list:
    while u and u[-1] == 0:
        u.pop()
    return u


def _uni_rem_frac(a: list, b: list) -> list:
    """Remainder of dense Fraction coefficient lists (b nonzero, stripped)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db:
        f = r[-1] / lb
        off = len(r) - 1 - db
        for j in range(db + 1):
            r[off + j] -= f * b[j]
        r.pop()
        _uni_strip(r)
        if not r:
            break
    return r


def _uni_gcd_degree(a: list, b: list) -> int:
    a, b = _uni_strip(list(a)), _uni_strip(list(b))
    while b:
        a, b = b, _uni_rem_frac(a, b)
    return len(a) - 1


def _provably_coprime(a: MPoly, b: MPoly) -> bool:
    """Certify gcd(a, b) == 1 by integer evaluation, one variable at a time.

    For each variable v active in both operands, bind the remaining variables
    to integers at which both leading coefficients in v survive; the image of
    the gcd then has the gcd's exact degree in v, so a constant univariate
    gcd proves deg_v gcd(a, b) == 0.  Degree zero in every shared variable
    (variables in only one operand cannot appear in the gcd) forces a
    constant gcd.  Inconclusive evaluations make this return False, which
    only costs a fall-through to the pseudo-remainder sequence.
    """
    a, b = MPoly._align(a, b)
    shared = [v for v in a.vars if a.degree(v) > 0 and b.degree(v) > 0]
    for v in shared:
        others = [w for w in a.vars if w != v]
        for trial in range(3):
            rng = random.Random(0x5EED + 31 * trial)
            point = {w: Fraction(rng.randrange(2 + trial, 50 + 20 * trial))
                     for w in others}
            ua = _uni_strip(_eval_except(a, v, point))
            ub = _uni_strip(_eval_except(b, v, point))
            if len(ua) - 1 != a.degree(v) or len(ub) - 1 != b.degree(v):
                continue  # a leading coefficient vanished; pick a new point
            if _uni_gcd_degree(ua, ub) == 0:
                break
        else:
            return False
    return True


def _is_atomic_factor(f: MPoly) -> bool:
    """Factors known irreducible: affine-linear, or univariate from full factoring."""
    return f.total_degree() == 1 or len(f.compress().vars) <= 1


def _factored_gcd(a: MPoly, b: MPoly, exclude: frozenset = frozenset()) -> MPoly:
    """Gcd by factoring both operands and matching factors structurally.

    Affine-linear and univariate factors are irreducible, so equal factors
    match exactly and distinct ones are coprime.  Unfactored cofactors are
    retried with the remaining variables as the factoring variable; only
    when every variable is exhausted does the (much smaller) residue go to
    the pseudo-remainder gcd.
    """
    from .factorize import parametric_factor

    shared = [v for v in a.vars
              if v not in exclude and a.degree(v) > 0 and b.degree(v) > 0]
    if not shared:
        return _prs_gcd(a, b)
    # factor with respect to the variable of highest degree: it carries the
    # most factors, leaving the least work for the content machinery
    v = max(shared, key=lambda w: min(a.degree(w), b.degree(w)))
    _, fa = parametric_factor(a, v)
    _, fb = parametric_factor(b, v)
    counts = {}
    for f, m in fb:
        counts[f] = counts.get(f, 0) + m
    g = MPoly.one()
    atoms_a = []
    comp_a = MPoly.one()
    for f, m in fa:
        common = min(m, counts.get(f, 0))
        if common:
            g = g * f ** common
            counts[f] -= common
            m -= common
        if m:
            if _is_atomic_factor(f):
                atoms_a.append((f, m))
            else:
                comp_a = comp_a * f ** m
    atoms_b = []
    comp_b = MPoly.one()
    for f, m in counts.items():
        if m:
            if _is_atomic_factor(f):
                atoms_b.append((f, m))
            else:
                comp_b = comp_b * f ** m
    # leftover atomic (irreducible) factors are pairwise distinct and so
    # coprime, but one may still divide an unfactored composite cofactor on
    # the other side; trial division settles those cheaply
    def pull_atoms(atoms, comp):
        nonlocal g
        for f, m in atoms:
            while m:
                try:
                    comp = comp.divexact(f)
                except ValueError:
                    break
                g = g * f
                m -= 1
        return comp
    if not comp_b.is_constant:
        comp_b = pull_atoms(atoms_a, comp_b)
    if not comp_a.is_constant:
        comp_a = pull_atoms(atoms_b, comp_a)
    if not comp_a.is_constant and not comp_b.is_constant \
            and not _provably_coprime(comp_a, comp_b):
        g = g * _factored_gcd(comp_a, comp_b, exclude | {v})
    return g.primitive()


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Primitive, positively-normalized gcd; see _provably_coprime/_factored_gcd."""
    a = a.compress()
    b = b.compress()
    if a.is_zero:
        return b.primitive()
    if b.is_zero:
        return a.primitive()
    if a.is_constant or b.is_constant:
        return MPoly.one()
    a, b = MPoly._align(a, b)
    if len(a.vars) > 1:
        if _provably_coprime(a, b):
            return MPoly.one()
        return _factored_gcd(a, b)
    return _prs_gcd(a, b)


def _prs_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Primitive pseudo-remainder-sequence gcd (aligned, nonconstant inputs)."""
    a, b = MPoly._align(a.compress(), b.compress())
    if a.is_zero:
        return b.primitive()
    if b.is_zero:
        return a.primitive()
    if a.is_constant or b.is_constant:
        return MPoly.one()
    v = next(w for w in a.vars if a.degree(w) > 0 or b.degree(w) > 0)
    ua, ub = _uni(a, v), _uni(b, v)
    ca = _coeff_gcd(ua.values())
    cb = _coeff_gcd(ub.values())
    cont = poly_gcd(ca, cb)
    ua = {d: c.divexact(ca) for d, c in ua.items()}
    ub = {d: c.divexact(cb) for d, c in ub.items()}
    if _uni_degree(ua) < _uni_degree(ub):
        ua, ub = ub, ua
    while ub:
        r = _pseudo_rem(ua, ub)
        if r:
            cg = _coeff_gcd(r.values())
            r = {d: c.divexact(cg) for d, c in r.items()}
        ua, ub = ub, r
    pp = MPoly.from_coeffs_in(v, ua)
    return (pp * cont).primitive()


def poly_lcm(a: MPoly, b: MPoly) -> MPoly:
    if a.is_zero or b.is_zero:
        return MPoly.zero()
    return (a * b).divexact(poly_gcd(a, b)).primitive()


# -- rational functions ---------------------------------------------------


class RatFunc:
    """Reduced fraction of two MPoly; the field element of Q(params)(k).

    Normalization: numerator/denominator coprime (content included), the
    denominator primitive with positive graded-lex leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly = None, *, _reduced=False):
        if isinstance(num, (int, Fraction)):
            num = MPoly.const(num)
        if den is None:
            den = MPoly.one()
        elif isinstance(den, (int, Fraction)):
            den = MPoly.const(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def const(c: Scalar) -> "RatFunc":
        return RatFunc(MPoly.const(c), MPoly.one(), _reduced=True)

    @staticmethod
    def var(name: str) -> "RatFunc":
        return RatFunc(MPoly.var(name), MPoly.one(), _reduced=True)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant

    def as_poly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError(f"not a polynomial: {self}")
        return self.num * (1 / self.den.constant_value())

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # cross-cancel before multiplying: gcds of the (already reduced)
        # operands are far cheaper than one gcd of the full products, and
        # the cross-reduced product is itself reduced
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num if g1.is_constant else self.num.divexact(g1)
        d2 = other.den if g1.is_constant else other.den.divexact(g1)
        n2 = other.num if g2.is_constant else other.num.divexact(g2)
        d1 = self.den if g2.is_constant else self.den.divexact(g2)
        num, den = n1 * n2, d1 * d2
        if num.is_zero:
            return RatFunc(MPoly.zero(), MPoly.one(), _reduced=True)
        c = den.content()
        if den.leading_coeff() < 0:
            c = -c
        if c != 1:
            num, den = num * (1 / c), den * (1 / c)
        return RatFunc(num.compress(), den.compress(), _reduced=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        # powers of coprime polynomials stay coprime, and the power of a
        # primitive positive-lc denominator keeps that normalization
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        num, den = self.den, self.num
        c = den.content()
        if den.leading_coeff() < 0:
            c = -c
        if c != 1:
            num, den = num * (1 / c), den * (1 / c)
        return RatFunc(num, den, _reduced=True)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def subs(self, bindings) -> "RatFunc":
        num = self.num.subs(bindings)
        den = self.den.subs(bindings)
        return RatFunc(num, den)

    def shift(self, v: str, offset) -> "RatFunc":
        return RatFunc(self.num.shift(v, offset), self.den.shift(v, offset))

    def eval(self, bindings) -> Fraction:
        d = self.den.eval(bindings)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at {bindings}")
        return self.num.eval(bindings) / d

    def derivative(self, v: str) -> "RatFunc":
        return RatFunc(
            self.num.derivative(v) * self.den - self.num * self.den.derivative(v),
            self.den * self.den,
        )

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den == MPoly.one():
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MPoly):
        return RatFunc(x, MPoly.one(), _reduced=True)
    if isinstance(x, (int, Fraction)):
        return RatFunc.const(x)
    return NotImplemented


def _reduce(num: MPoly, den: MPoly):
    if num.is_zero:
        return MPoly.zero(), MPoly.one()
    g = poly_gcd(num, den)
    if not (g.is_constant and g.constant_value() == 1):
        num = num.divexact(g)
        den = den.divexact(g)
    c = den.content()
    if den.leading_coeff() < 0:
        c = -c
    num = num * (1 / c)
    den = den * (1 / c)
    return num.compress(), den.compress()


def ratfunc_normalize(num: MPoly, den: MPoly) -> RatFunc:
    """Reduced fraction equal to num/den."""
    return RatFunc(num, den)
