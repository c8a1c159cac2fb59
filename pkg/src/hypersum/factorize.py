"""Univariate factorization over Q and the root machinery built on it.

The pipeline is classical: Yun squarefree decomposition, Cantor-Zassenhaus
factorization modulo a well-chosen odd prime, quadratic multifactor Hensel
lifting past the Mignotte bound, and subset recombination by increasing
cardinality with exact trial division.

Also provided: rational/integer root extraction, shift-dispersion sets via
resultants, and a lightweight "parametric" factorizer that peels off factors
linear in a main variable whose roots are affine in the remaining parameters
(enough to present telescoped recurrences in fully factored form).
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .linalg import sylvester_resultant
from .poly import MPoly, poly_gcd

# ---------------------------------------------------------------------------
# dense integer polynomials (low-to-high coefficient lists)
# ---------------------------------------------------------------------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zadd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _zsub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _zmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _zmod(a, m):
    return _trim([c % m for c in a])


def _zsym(a, m):
    """Symmetric representative in (-m/2, m/2]."""
    h = m // 2
    return _trim([c - m if c > h else c for c in _zmod(a, m)])


def _zdivmod_monic(a, b, m):
    """Division by b with invertible leading coefficient, coefficients mod m."""
    a = _zmod(a, m)
    b = _zmod(b, m)
    inv = pow(b[-1], -1, m)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        c = (r[-1] * inv) % m
        d = len(r) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            r[d + i] = (r[d + i] - c * y) % m
        _trim(r)
    return _trim(q), r


def _zgcd_modp(a, b, p):
    a, b = _zmod(a, p), _zmod(b, p)
    while b:
        _, r = _zdivmod_monic(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _zext_gcd_modp(a, b, p):
    """(s, t) with s*a + t*b = 1 mod p, for coprime a, b."""
    r0, r1 = _zmod(a, p), _zmod(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _zdivmod_monic(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _zmod(_zsub(s0, _zmul(q, s1)), p)
        t0, t1 = t1, _zmod(_zsub(t0, _zmul(q, t1)), p)
    if len(r0) != 1:
        raise ValueError("arguments not coprime")
    inv = pow(r0[0], -1, p)
    return _zmod([c * inv for c in s0], p), _zmod([c * inv for c in t0], p)


def _zpowmod(a, e, f, m):
    """a^e modulo (f, m); f has invertible leading coefficient mod m."""
    result = [1]
    base = _zdivmod_monic(a, f, m)[1]
    while e:
        if e & 1:
            result = _zdivmod_monic(_zmul(result, base), f, m)[1]
        base = _zdivmod_monic(_zmul(base, base), f, m)[1]
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# factorization mod p (Cantor-Zassenhaus)
# ---------------------------------------------------------------------------

_rng = random.Random(0x5eed)


def _equal_degree_split(f, d, p):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = _trim([_rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        g = _zgcd_modp(a, f, p)
        if 1 < len(g) < len(f):
            break
        b = _zsub(_zpowmod(a, (p ** d - 1) // 2, f, p), [1])
        g = _zgcd_modp(b, f, p)
        if 1 < len(g) < len(f):
            break
    other = _zdivmod_monic(f, g, p)[0]
    return _equal_degree_split(g, d, p) + _equal_degree_split(other, d, p)


def _factor_modp(f, p):
    """Irreducible factors of a monic squarefree f mod p (odd prime)."""
    factors = []
    h = [0, 1]
    v = list(f)
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        h = _zpowmod(h, p, v, p)
        g = _zgcd_modp(_zsub(h, [0, 1]), v, p)
        if len(g) > 1:
            factors.extend(_equal_degree_split(g, d, p))
            v = _zdivmod_monic(v, g, p)[0]
            h = _zdivmod_monic(h, v, p)[1]
    if len(v) > 1:
        factors.append(v)
    return factors


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def _hensel_step(m, f, g, h, s, t):
    """One quadratic lift: from f = g*h, s*g + t*h = 1 (mod m) to mod m^2."""
    m2 = m * m
    e = _zmod(_zsub(f, _zmul(g, h)), m2)
    q, r = _zdivmod_monic(_zmul(s, e), h, m2)
    g1 = _zmod(_zadd(g, _zadd(_zmul(t, e), _zmul(q, g))), m2)
    h1 = _zmod(_zadd(h, r), m2)
    b = _zmod(_zsub(_zadd(_zmul(s, g1), _zmul(t, h1)), [1]), m2)
    c, d = _zdivmod_monic(_zmul(s, b), h1, m2)
    s1 = _zmod(_zsub(s, d), m2)
    t1 = _zmod(_zsub(_zsub(t, _zmul(t, b)), _zmul(c, g1)), m2)
    return g1, h1, s1, t1


def _hensel_lift_tree(f, facs, p, target):
    """Lift the monic factorization f = prod(facs) from mod p to mod target."""
    if len(facs) == 1:
        return [_zmod(f, target)]
    half = len(facs) // 2
    g = [1]
    for fac in facs[:half]:
        g = _zmod(_zmul(g, fac), p)
    h = [1]
    for fac in facs[half:]:
        h = _zmod(_zmul(h, fac), p)
    s, t = _zext_gcd_modp(g, h, p)
    m = p
    while m < target:
        g, h, s, t = _hensel_step(m, _zmod(f, m * m), g, h, s, t)
        m = m * m
    g, h = _zmod(g, target), _zmod(h, target)
    return _hensel_lift_tree(g, facs[:half], p, target) + _hensel_lift_tree(h, facs[half:], p, target)


# ---------------------------------------------------------------------------
# squarefree decomposition and factorization over Q
# ---------------------------------------------------------------------------


def _to_int_poly(p: MPoly, v: str):
    cs = p.primitive().univariate_coeffs(v)
    return [int(c) for c in cs]


def _from_int_poly(cs, v: str) -> MPoly:
    return MPoly.from_univariate(v, cs)


def squarefree_decomposition(p: MPoly, v: str):
    """Yun's algorithm: [(squarefree factor, multiplicity)], primitive factors."""
    p = p.compress()
    if p.is_constant:
        return []
    out = []
    f = p.primitive()
    df = f.derivative(v)
    a = poly_gcd(f, df)
    b = f.divexact(a)
    c = df.divexact(a)
    d = c - b.derivative(v)
    i = 1
    while not b.is_constant:
        g = poly_gcd(b, d)
        if not g.is_constant:
            out.append((g.primitive(), i))
        b = b.divexact(g)
        c = d.divexact(g)
        d = c - b.derivative(v)
        i += 1
    return out


def _small_primes(limit=2000):
    sieve = [True] * limit
    sieve[0] = sieve[1] = False
    for i in range(2, int(limit ** 0.5) + 1):
        if sieve[i]:
            for j in range(i * i, limit, i):
                sieve[j] = False
    return [i for i, s in enumerate(sieve) if s]


_PRIMES = _small_primes()


def _mignotte_exponent(f, p):
    n = len(f) - 1
    norm = math.isqrt(sum(c * c for c in f)) + 1
    bound = 2 * abs(f[-1]) * norm * (1 << n) + 1
    l = 1
    while p ** l < bound:
        l += 1
    return l


def _factor_squarefree_z(f, v: str):
    """Irreducible factors of a primitive squarefree integer polynomial."""
    n = len(f) - 1
    if n <= 1:
        return [_from_int_poly(f, v)]
    lc = f[-1]
    # work on a monic model: m(x) = lc^(n-1) f(x / lc)
    if abs(lc) != 1:
        monic = [f[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
    else:
        monic = list(f) if lc > 0 else [-c for c in f]

    # choose a prime keeping the modular factor count low
    candidates = []
    for p in _PRIMES:
        if p == 2 or monic[-1] % p == 0:
            continue
        fp = _zmod(monic, p)
        dfp = _zmod(_trim([i * c for i, c in enumerate(monic)][1:]), p)
        if len(_zgcd_modp(fp, dfp, p)) != 1:
            continue
        candidates.append((p, _factor_modp(fp, p)))
        if len(candidates) >= 5:
            break
    if not candidates:
        raise RuntimeError("no usable prime found")
    p, modular = min(candidates, key=lambda c: (len(c[1]), c[0]))

    l = _mignotte_exponent(monic, p)
    target = p ** l
    lifted = _hensel_lift_tree(_zmod(monic, target), modular, p, target)

    # subset recombination with trial division
    found = []
    remaining = list(lifted)
    current = list(monic)
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for combo in itertools.combinations(range(len(remaining)), size):
            g = [current[-1] % target]
            for i in combo:
                g = _zmod(_zmul(g, remaining[i]), target)
            g = _zsym(g, target)
            gp = _from_int_poly(g, v).primitive()
            cur = _from_int_poly(current, v)
            if gp.divides(cur):
                found.append(gp)
                current = _to_int_poly(cur.divexact(gp), v)
                remaining = [r for j, r in enumerate(remaining) if j not in combo]
                hit = True
                break
        if not hit:
            size += 1
    if len(current) > 1:
        found.append(_from_int_poly(current, v).primitive())

    if abs(lc) != 1:
        # undo the monic substitution x -> lc * x
        x = MPoly.var(v)
        found = [g.subs({v: MPoly.const(lc) * x}).primitive() for g in found]
    return found


def factor_univariate(p: MPoly, v: str):
    """Complete factorization over Q: (unit, [(irreducible primitive, mult)]).

    The unit times the product of factor powers reconstructs the input.
    Factors have positive graded-lex leading coefficient and are sorted
    deterministically.
    """
    p = p.compress()
    if p.is_zero:
        return Fraction(0), []
    if p.is_constant:
        return p.constant_value(), []
    unit = p.content()
    if p.leading_coeff() < 0:
        unit = -unit
    prim = p * (1 / unit)
    factors = []
    xv = MPoly.var(v)
    # pull out a power of v so trailing coefficients are nonzero
    cs = prim.univariate_coeffs(v)
    val = 0
    while not cs[val]:
        val += 1
    if val:
        factors.append((xv, val))
        prim = prim.divexact(xv ** val)
    for sf, mult in squarefree_decomposition(prim, v):
        for irr in _factor_squarefree_z(_to_int_poly(sf, v), v):
            factors.append((irr.primitive(), mult))
    factors.sort(key=lambda fm: (fm[0].total_degree(), str(fm[0])))
    return unit, factors


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 3 == 0:
        return 3
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _prime_factors(n: int, out: dict):
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))


def _is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 via fixed witness set."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _divisors(n: int):
    n = abs(n)
    if n <= 1:
        return [n] if n else []
    primes = {}
    _prime_factors(n, primes)
    out = [1]
    for p, e in primes.items():
        out = [d * p ** i for d in out for i in range(e + 1)]
    return sorted(out)


def rational_roots(p: MPoly, v: str):
    """Sorted rational roots (without multiplicity) of a univariate polynomial."""
    p = p.compress()
    if p.is_zero:
        raise ValueError("zero polynomial has every root")
    if p.is_constant:
        return []
    f = _to_int_poly(p, v)
    roots = set()
    val = 0
    while not f[val]:
        val += 1
    if val:
        roots.add(Fraction(0))
        f = f[val:]
    a0, an = f[0], f[-1]
    n = len(f) - 1
    # a root num/den requires (num - den) | f(1) and (num + den) | f(-1),
    # which rejects almost every candidate without an evaluation
    f_at_1 = sum(f)
    f_at_m1 = sum(c if i % 2 == 0 else -c for i, c in enumerate(f))
    nums = _divisors(a0)
    for den in _divisors(an):
        dpow = [1]
        for _ in range(n):
            dpow.append(dpow[-1] * den)
        for num in nums:
            if math.gcd(num, den) != 1:
                continue
            for pn in (num, -num):
                d1 = pn - den
                if (f_at_1 % d1 if d1 else f_at_1) != 0:
                    continue
                d2 = pn + den
                if (f_at_m1 % d2 if d2 else f_at_m1) != 0:
                    continue
                acc = 0
                for i in range(n, -1, -1):
                    acc = acc * pn + f[i] * dpow[n - i]
                if acc == 0:
                    roots.add(Fraction(pn, den))
    return sorted(roots)


def nonneg_integer_roots(p: MPoly, v: str):
    return sorted(int(r) for r in rational_roots(p, v) if r.denominator == 1 and r >= 0)


def dispersion_set(q: MPoly, r: MPoly, k: str):
    """Nonnegative integers j with gcd(q(k), r(k+j)) nontrivial over Q(params).

    Factor pairs are compared directly: for linear factors the shift is the
    difference of the roots; other pairs fall back to the resultant method,
    which stays far cheaper on factors than on the full polynomials.
    """
    if q.degree(k) <= 0 or r.degree(k) <= 0:
        return []
    _, qf = parametric_factor(q, k)
    _, rf = parametric_factor(r, k)
    out = set()
    for f, _m in qf:
        if f.degree(k) <= 0:
            continue
        froot = _linear_root(f, k)
        for g, _m2 in rf:
            if g.degree(k) <= 0:
                continue
            if froot is not None:
                groot = _linear_root(g, k)
                if groot is not None:
                    d = groot - froot
                    if d.is_constant:
                        v = d.constant_value()
                        if v.denominator == 1 and v >= 0:
                            out.add(int(v))
                    continue
            out.update(_dispersion_resultant(f, g, k))
    return sorted(out)


def _linear_root(f: MPoly, k: str):
    """-c0/c1 for f = c1*k + c0 linear in k, else None."""
    if f.degree(k) != 1:
        return None
    cs = f.coeffs_in(k)
    from .poly import RatFunc
    return RatFunc(-cs.get(0, MPoly.zero()), cs[1])


def _dispersion_resultant(q: MPoly, r: MPoly, k: str):
    """Resultant-based dispersion for a pair of (typically small) factors."""
    jv = "_j"
    while jv in q.vars or jv in r.vars:
        jv += "_"
    rshift = r.shift(k, MPoly.var(jv))
    res = sylvester_resultant(q, rshift, k)
    if res.is_zero:
        raise ValueError("resultant vanished identically")
    # j0 qualifies iff substituting it kills every parameter monomial's
    # j-coefficient, i.e. j0 is a common root of those univariate polynomials
    cj = {}
    ji = res.vars.index(jv)
    for exp, c in res.terms.items():
        key = exp[:ji] + exp[ji + 1:]
        cj.setdefault(key, {})[ (exp[ji],) ] = c
    g = MPoly.zero()
    for key, terms in cj.items():
        g = poly_gcd(g, MPoly((jv,), terms))
        if g == MPoly.one():
            return []
    return nonneg_integer_roots(g, jv)


# ---------------------------------------------------------------------------
# parametric display factoring
# ---------------------------------------------------------------------------


def _affine_linear_factors(p: MPoly, v: str):
    """Peel factors s*v + (affine form in the other variables) off p.

    Roots are recovered by evaluating the parameters at sample points,
    finding rational roots of each specialization, interpolating an affine
    candidate, and trial dividing.  Returns (list of factors, cofactor).
    """
    params = [w for w in p.compress().vars if w != v]
    found = []
    cur = p
    # distinct base values keep roots of distinct affine factors apart
    spread = [5, 17, 37, 53, 71, 89, 101, 113]

    progress = True
    while progress and cur.degree(v) > 0:
        progress = False
        for attempt in range(4):
            base = {q: Fraction(spread[i % len(spread)] + 7 * attempt)
                    for i, q in enumerate(params)}
            pts = [dict(base)]
            for q in params:
                d = dict(base)
                d[q] = d[q] + 1
                pts.append(d)
            specs = [MPoly.from_univariate(v, [c.eval(pt) for c in _dense_coeffs(cur, v)]) for pt in pts]
            if any(s.degree(v) != cur.degree(v) for s in specs):
                continue
            ok = False
            for r0 in rational_roots(specs[0], v):
                slope = r0.denominator
                alpha0 = -r0 * slope
                coeffs = {}
                good = True
                for q, spec in zip(params, specs[1:]):
                    # the factor's root at the perturbed point should be the
                    # one nearest r0; trial division below verifies the guess
                    best = None
                    for r1 in rational_roots(spec, v):
                        if best is None or abs(r1 - r0) < abs(best - r0):
                            best = r1
                    if best is None:
                        good = False
                        break
                    coeffs[q] = -best * slope - alpha0
                if not good:
                    continue
                const = alpha0 - sum(coeffs[q] * base[q] for q in params)
                cand = MPoly.const(slope) * MPoly.var(v) + MPoly.const(const)
                for q in params:
                    cand = cand + MPoly.const(coeffs[q]) * MPoly.var(q)
                if cand.is_zero or cand.degree(v) != 1:
                    continue
                cand = cand.primitive()
                if cand.divides(cur):
                    cur = cur.divexact(cand)
                    found.append(cand)
                    ok = True
                    break
            if ok:
                progress = True
                break
    return found, cur


def _dense_coeffs(p: MPoly, v: str):
    cs = p.coeffs_in(v)
    n = p.degree(v)
    return [cs.get(i, MPoly.zero()) for i in range(n + 1)]


_parametric_factor_cache = {}


def parametric_factor(p: MPoly, v: str):
    """Display-oriented factorization of a polynomial in v with parameters.

    Returns (unit, [(factor, multiplicity)]).  Parameter-free polynomials are
    factored completely over Q; otherwise factors linear in v with roots
    affine in the parameters are extracted and the remaining cofactor is kept
    whole.  Results are cached: gcd computations refactor the same operands
    many times over.
    """
    key = (p, v)
    hit = _parametric_factor_cache.get(key)
    if hit is not None:
        return hit[0], list(hit[1])
    unit, factors = _parametric_factor_uncached(p, v)
    if len(_parametric_factor_cache) > 4096:
        _parametric_factor_cache.clear()
    _parametric_factor_cache[key] = (unit, tuple(factors))
    return unit, factors


def _parametric_factor_uncached(p: MPoly, v: str):
    p = p.compress()
    if p.is_zero:
        return Fraction(0), []
    params = [w for w in p.vars if w != v]
    if not params:
        return factor_univariate(p, v)
    unit = p.content()
    if p.leading_coeff() < 0:
        unit = -unit
    prim = p * (1 / unit)

    factors = []
    # content with respect to v lives in the parameters only
    dense = _dense_coeffs(prim, v)
    cont = MPoly.zero()
    for c in dense:
        cont = poly_gcd(cont, c)
        if cont == MPoly.one():
            break
    if not cont.is_constant:
        prim = prim.divexact(cont)
        for q in cont.compress().vars:
            sub, cont = _affine_linear_factors(cont, q)
            factors.extend((f, 1) for f in sub)
        if not cont.is_constant:
            factors.append((cont.primitive(), 1))

    linear, rest = _affine_linear_factors(prim, v)
    counts = {}
    for f in linear:
        counts[f] = counts.get(f, 0) + 1
    factors.extend((f, m) for f, m in counts.items())
    if not rest.is_constant:
        rparams = [w for w in rest.compress().vars if w != v]
        if not rparams:
            u2, sub = factor_univariate(rest, v)
            unit *= u2
            factors.extend(sub)
        else:
            factors.append((rest.primitive(), 1))
    elif rest.constant_value() != 1:
        unit *= rest.constant_value()
    factors.sort(key=lambda fm: (fm[0].total_degree(), str(fm[0])))
    return unit, factors
