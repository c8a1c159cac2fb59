from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypersum.linalg import (
    INCONSISTENT,
    PARAMETRIC,
    UNIQUE,
    bareiss_det,
    fraction_free_solve,
    sylvester_resultant,
)
from hypersum.poly import MPoly, RatFunc

a = MPoly.var("a")
x = MPoly.var("x")
j = MPoly.var("j")
k = MPoly.var("k")


class TestDeterminant:
    def test_numeric(self):
        assert bareiss_det([[1, 2], [3, 4]]) == MPoly.const(-2)

    def test_singular(self):
        assert bareiss_det([[1, 2], [2, 4]]).is_zero

    def test_parametric(self):
        m = [[1, 2 * a, 3], [5, 6, 7], [9, 10, 11]]
        assert bareiss_det(m) == 16 * a - 16

    def test_permutation_sign(self):
        m = [[0, 1], [1, 0]]
        assert bareiss_det(m) == MPoly.const(-1)

    def test_empty(self):
        assert bareiss_det([]) == MPoly.one()


class TestSolve:
    def test_unique_parametric_rhs(self):
        m = [[1, 2 * a, 3], [5, 6, 7], [9, 10, 11]]
        sol = fraction_free_solve(m, [4, 8, 12])
        assert sol.status == UNIQUE
        xv, yv, zv = sol.particular
        assert xv == RatFunc.const(Fraction(-1, 2))
        assert yv == RatFunc.const(0)
        assert zv == RatFunc.const(Fraction(3, 2))

    def test_inconsistent(self):
        sol = fraction_free_solve([[1, 1], [1, 1]], [1, 2])
        assert sol.status == INCONSISTENT
        assert sol.particular is None

    def test_parametric_solution_space(self):
        sol = fraction_free_solve([[1, 1, 1]], [3])
        assert sol.status == PARAMETRIC
        assert len(sol.nullspace) == 2
        # particular really solves the system
        s = sol.particular
        assert s[0] + s[1] + s[2] == RatFunc.const(3)
        for v in sol.nullspace:
            assert v[0] + v[1] + v[2] == RatFunc.const(0)

    def test_homogeneous_nullspace(self):
        sol = fraction_free_solve([[1, -1], [2, -2]], [0, 0])
        assert sol.status == PARAMETRIC
        (v,) = sol.nullspace
        assert v[0] == v[1]

    def test_rational_entries_in_solution(self):
        m = [[a, 1], [0, 1]]
        sol = fraction_free_solve(m, [1, 1])
        assert sol.status == UNIQUE
        assert sol.particular[0] == RatFunc(MPoly.zero(), MPoly.one())


class TestResultant:
    def test_common_root_detection(self):
        # x^2-1 and x-1 share the root 1
        p = x ** 2 - 1
        q = x - 1
        assert sylvester_resultant(p, q, "x").is_zero

    def test_classic_value(self):
        # res(x^2+1, x^2-1) = 4
        assert sylvester_resultant(x ** 2 + 1, x ** 2 - 1, "x") == MPoly.const(4)

    def test_shift_resultant_roots(self):
        # res_k(k-1, k+j-3) vanishes exactly when j = 2
        r = sylvester_resultant(k - 1, k + j - 3, "k")
        assert r == j - 2

    def test_constant_cases(self):
        assert sylvester_resultant(MPoly.const(5), x + 1, "x") == MPoly.const(5)


mats = st.lists(
    st.lists(st.integers(min_value=-5, max_value=5), min_size=3, max_size=3),
    min_size=3,
    max_size=3,
)


class TestProperties:
    @given(mats)
    @settings(max_examples=50, deadline=None)
    def test_det_matches_fraction_expansion(self, m):
        # cofactor expansion oracle
        def det3(m):
            return (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )

        assert bareiss_det(m) == MPoly.const(det3(m))

    @given(mats, st.lists(st.integers(min_value=-5, max_value=5), min_size=3, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_solution_satisfies_system(self, m, b):
        sol = fraction_free_solve(m, b)
        if sol.status == INCONSISTENT:
            return
        s = sol.particular
        for row, rhs in zip(m, b):
            acc = RatFunc.const(0)
            for c, v in zip(row, s):
                acc = acc + RatFunc.const(c) * v
            assert acc == RatFunc.const(rhs)
