from fractions import Fraction

import pytest

from hypersum import expr as E
from hypersum.expr import eval_at, parse
from hypersum.gosper import degree_bound, gosper, gosper_pqr, solve_f
from hypersum.hyperterm import term_ratio
from hypersum.factorize import dispersion_set
from hypersum.poly import MPoly, RatFunc


def rf(text):
    return E.to_ratfunc(parse(text))


k = MPoly.var("k")
SIAM = "(-1)^(k+1)*(4*k+1)*(2*k)!/(k!*4^k*(2*k-1)*(k+1)!)"


class TestPQR:
    def test_siam_triple(self):
        ratio = term_ratio(parse(SIAM), "k")
        p, q, r = gosper_pqr(ratio, "k")
        assert p == 4 * k + 1
        assert q == -2 * k + 3
        assert r == 2 * k + 2

    def test_constant_term(self):
        p, q, r = gosper_pqr(RatFunc.const(1), "k")
        assert (p, q, r) == (MPoly.one(), MPoly.one(), MPoly.one())

    def test_invariants_binomial(self):
        ratio = rf("(n-k)/(k+1)")
        p, q, r = gosper_pqr(ratio, "k")
        # representation identity
        lhs = ratio
        rhs = (RatFunc(p.shift("k", 1)) / RatFunc(p)) * \
              (RatFunc(q.shift("k", 1)) / RatFunc(r.shift("k", 1)))
        assert lhs == rhs
        assert dispersion_set(q, r, "k") == []

    def test_dispersion_transfer(self):
        # ratio with a built-in integer shift between num and den roots
        ratio = rf("(k+3)/(k+1)")  # term k(k+1)(k+2) style
        p, q, r = gosper_pqr(ratio, "k")
        assert dispersion_set(q, r, "k") == []
        rhs = (RatFunc(p.shift("k", 1)) / RatFunc(p)) * \
              (RatFunc(q.shift("k", 1)) / RatFunc(r.shift("k", 1)))
        assert rhs == ratio


class TestDegreeBound:
    def test_siam(self):
        assert degree_bound(4 * k + 1, -2 * k + 3, 2 * k + 2, "k") == 0

    def test_summand_one(self):
        one = MPoly.one()
        d = degree_bound(one, one, one, "k")
        assert d >= 1  # admits the linear f of s_k = k

    def test_binomial_alternating(self):
        ratio = rf("-(n-k)/(k+1)")
        p, q, r = gosper_pqr(ratio, "k")
        assert degree_bound(p, q, r, "k") >= 0


class TestGosper:
    def test_siam(self):
        res = gosper(parse(SIAM), "k")
        assert res.status == "success"
        c = res.certificate
        assert c.p == 4 * k + 1
        assert c.q == -2 * k + 3
        assert c.r == 2 * k + 2
        assert c.f == RatFunc.const(-1)
        assert c.multiplier == rf("-2*(k+1)/(4*k+1)")

    def test_siam_telescoped_sum_is_one(self):
        res = gosper(parse(SIAM), "k")
        s = res.antidifference
        # sum_{k=1}^{N} a_k = s_{N+1} - s_1; as N grows it approaches 1
        total = sum(eval_at(parse(SIAM), {"k": kk}) for kk in range(1, 21))
        assert total == eval_at(s, {"k": 21}) - eval_at(s, {"k": 1})
        # the telescoped form: s_{N+1} -> 0, s_1 = -1, so the sum is 1
        assert eval_at(s, {"k": 1}) == -1

    def test_one_over_k_fails(self):
        res = gosper(parse("1/k"), "k")
        assert res.status == "no_hypergeometric_antidifference"

    def test_one_over_k_brute_force(self):
        # no polynomial f up to degree 10 satisfies the key equation
        ratio = rf("k/(k+1)")
        p, q, r = gosper_pqr(ratio, "k")
        a = q.shift("k", 1)
        kv = MPoly.var("k")
        found = False
        from hypersum.linalg import fraction_free_solve, INCONSISTENT
        for d in range(11):
            cols = [(a * (kv + 1) ** i - r * kv ** i).coeffs_in("k") for i in range(d + 1)]
            maxdeg = max([p.degree("k")] + [max(c) for c in cols if c])
            rows = [[c.get(dd, MPoly.zero()) for c in cols] for dd in range(maxdeg + 1)]
            rhs = [p.coeffs_in("k").get(dd, MPoly.zero()) for dd in range(maxdeg + 1)]
            if fraction_free_solve(rows, rhs).status != INCONSISTENT:
                found = True
        assert not found

    def test_alternating_binomial(self):
        res = gosper(parse("(-1)^k*binomial(n,k)"), "k")
        assert res.status == "success"
        assert res.certificate.multiplier == rf("-k/n")

    def test_constant_one(self):
        res = gosper(parse("1"), "k")
        assert res.status == "success"
        assert res.certificate.multiplier == rf("k")

    def test_certificate_recurrence(self):
        res = gosper(parse(SIAM), "k")
        c = res.certificate
        # p(k) = q(k+1) f(k) - r(k) f(k-1)
        lhs = RatFunc(c.p)
        rhs = RatFunc(c.q.shift("k", 1)) * c.f - RatFunc(c.r) * c.f.shift("k", -1)
        assert lhs == rhs


class TestTelescopingProperty:
    CASES = [
        ("binomial(n,k)*k", {"n": 9}),      # k*C(n,k) is Gosper-summable? verify either way
        ("(-1)^k*binomial(n,k)", {"n": 9}),
        (SIAM, {}),
        ("k*k!", {}),
        ("1", {}),
        ("k", {}),
        ("4^k/(binomial(2*k,k)*(2*k+1))", {}),
    ]

    def test_telescoping(self):
        for text, binding in self.CASES:
            e = parse(text)
            res = gosper(e, "k")
            if res.status != "success":
                continue
            s = res.antidifference
            lo, hi = 1, 15
            total = Fraction(0)
            for kk in range(lo, hi + 1):
                total += eval_at(e, {**binding, "k": kk})
            diff = eval_at(s, {**binding, "k": hi + 1}) - eval_at(s, {**binding, "k": lo})
            assert total == diff, text

    def test_certificate_identity_all_cases(self):
        for text, _ in self.CASES:
            e = parse(text)
            res = gosper(e, "k")
            if res.status != "success":
                continue
            R = res.certificate.multiplier
            assert R.shift("k", 1) * res.ratio - R == RatFunc.const(1), text
