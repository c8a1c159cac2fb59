from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypersum.factorize import (
    dispersion_set,
    factor_univariate,
    nonneg_integer_roots,
    parametric_factor,
    rational_roots,
    squarefree_decomposition,
)
from hypersum.poly import MPoly

x = MPoly.var("x")
k = MPoly.var("k")
n = MPoly.var("n")
a = MPoly.var("a")
b = MPoly.var("b")


def reconstruct(unit, factors):
    p = MPoly.const(unit)
    for f, m in factors:
        p = p * f ** m
    return p


class TestSquarefree:
    def test_simple(self):
        p = (x + 1) ** 2 * (x - 1)
        sf = squarefree_decomposition(p, "x")
        assert dict((m, f) for f, m in sf) == {2: x + 1, 1: x - 1}

    def test_already_squarefree(self):
        sf = squarefree_decomposition(x ** 2 + 1, "x")
        assert sf == [(x ** 2 + 1, 1)]


class TestFactorUnivariate:
    def test_x10(self):
        unit, factors = factor_univariate(MPoly.one() - x ** 10, "x")
        assert unit == -1
        polys = [f for f, m in factors]
        assert all(m == 1 for _, m in factors)
        assert x - 1 in polys
        assert x + 1 in polys
        assert x ** 4 + x ** 3 + x ** 2 + x + 1 in polys
        assert x ** 4 - x ** 3 + x ** 2 - x + 1 in polys
        assert len(polys) == 4
        assert reconstruct(unit, factors) == MPoly.one() - x ** 10

    def test_x105_coefficient_two(self):
        p = MPoly.one() - x ** 105
        unit, factors = factor_univariate(p, "x")
        assert unit == -1
        assert len(factors) == 8
        assert reconstruct(unit, factors) == p
        degrees = sorted(f.degree("x") for f, _ in factors)
        assert degrees == [1, 2, 4, 6, 8, 12, 24, 48]
        big = next(f for f, _ in factors if f.degree("x") == 48)
        coeffs = {abs(c) for c in big.univariate_coeffs("x")}
        assert 2 in coeffs  # the first cyclotomic-family factor with a coefficient beyond +-1

    def test_smaller_power_cyclotomics_stay_unit(self):
        # every 1 - x^m for m < 105 factors with coefficients in {0, +-1}
        for m in (10, 15, 21, 33, 35):
            unit, factors = factor_univariate(MPoly.one() - x ** m, "x")
            for f, _ in factors:
                assert set(abs(c) for c in f.univariate_coeffs("x")) <= {0, 1}
            assert reconstruct(unit, factors) == MPoly.one() - x ** m

    def test_irreducible_quadratic(self):
        p = 17 * n ** 2 + 51 * n + 39
        unit, factors = factor_univariate(p, "n")
        assert factors == [(p, 1)]
        assert unit == 1

    def test_nonmonic(self):
        p = (2 * x + 3) * (3 * x - 1) * (x ** 2 + x + 1)
        unit, factors = factor_univariate(p, "x")
        assert reconstruct(unit, factors) == p
        assert len(factors) == 3

    def test_with_multiplicity_and_content(self):
        p = MPoly.const(6) * x ** 2 * (x - 2) ** 3
        unit, factors = factor_univariate(p, "x")
        assert reconstruct(unit, factors) == p
        assert (x, 2) in factors
        assert (x - 2, 3) in factors

    def test_rational_coefficients(self):
        p = MPoly.const(Fraction(1, 2)) * (x ** 2 - 1)
        unit, factors = factor_univariate(p, "x")
        assert unit == Fraction(1, 2)
        assert reconstruct(unit, factors) == p


class TestRoots:
    def test_rational_roots(self):
        p = (2 * x - 1) * (x + 3) * (x ** 2 + 1)
        assert rational_roots(p, "x") == [-3, Fraction(1, 2)]

    def test_zero_root(self):
        assert rational_roots(x ** 2 - x, "x") == [0, 1]

    def test_nonneg_integer_roots(self):
        p = (x - 2) * (x + 1) * (3 * x - 1)
        assert nonneg_integer_roots(p, "x") == [2]


class TestDispersion:
    def test_basic(self):
        # gcd(k, k+j-3) nontrivial iff j = 3
        assert dispersion_set(k, k - 3, "k") == [3]

    def test_multiple(self):
        q = k * (k + 2)
        r = k
        # r(k+j) = k+j vanishes at k = -j; q has roots {0, -2}, so j in {0, 2}
        assert dispersion_set(q, r, "k") == [0, 2]

    def test_none(self):
        assert dispersion_set(k, k - Fraction(1, 2) * MPoly.one(), "k") == []

    def test_parametric(self):
        # gcd(k+n, k+n-4+j): only j=4 works for all n
        q = k + n
        r = k + n - 4
        assert dispersion_set(q, r, "k") == [4]

    def test_parametric_no_integer_shift(self):
        assert dispersion_set(k + n, k + 2 * n, "k") == []


class TestParametricFactor:
    def test_affine_linear_factors(self):
        p = (n + 1 + a - b) * (n + 1 + a) * (2 * n + 3)
        unit, factors = parametric_factor(p, "n")
        assert reconstruct(unit, factors) == p
        polys = sorted(str(f) for f, _ in factors)
        assert str(n + a - b + 1) in polys
        assert str(n + a + 1) in polys
        assert str(2 * n + 3) in polys

    def test_mixed_with_irreducible_quadratic(self):
        p = (2 * n + 3) * (17 * n ** 2 + 51 * n + 39)
        unit, factors = parametric_factor(p, "n")
        assert reconstruct(unit, factors) == p
        assert (2 * n + 3, 1) in factors
        assert (17 * n ** 2 + 51 * n + 39, 1) in factors

    def test_repeated_factor(self):
        p = (n + a) ** 2 * (n - 1)
        unit, factors = parametric_factor(p, "n")
        assert reconstruct(unit, factors) == p
        assert (n + a, 2) in factors

    def test_param_content(self):
        p = (a + 1) * (n + 2)
        unit, factors = parametric_factor(p, "n")
        assert reconstruct(unit, factors) == p
        assert (a + 1, 1) in factors
        assert (n + 2, 1) in factors

    def test_unit_sign(self):
        p = -(n + 1) * (n + 2)
        unit, factors = parametric_factor(p, "n")
        assert unit == -1
        assert reconstruct(unit, factors) == p


ipolys = st.builds(
    lambda cs: MPoly.from_univariate("x", cs),
    st.lists(st.integers(min_value=-8, max_value=8), min_size=2, max_size=6),
)


class TestProperties:
    @given(ipolys, ipolys)
    @settings(max_examples=40, deadline=None)
    def test_factor_product_roundtrip(self, p, q):
        f = p * q
        if f.is_zero or f.is_constant:
            return
        unit, factors = factor_univariate(f, "x")
        assert reconstruct(unit, factors) == f

    @given(ipolys)
    @settings(max_examples=40, deadline=None)
    def test_factors_have_no_rational_factorization_gaps(self, p):
        if p.is_zero or p.is_constant:
            return
        unit, factors = factor_univariate(p, "x")
        for f, _ in factors:
            if f.degree("x") > 1:
                assert rational_roots(f, "x") == []
