from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from helpers import fractions
from lieruth.linalg import inverse, matmul, nullspace, rank, identity, solve

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(fractions, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_rank_matches_sympy(m):
    assert rank(m) == sympy.Matrix(m).rank()


@given(matrices)
def test_nullspace_is_kernel(m):
    cols = len(m[0])
    basis = nullspace(m, cols)
    assert len(basis) == cols - rank(m)
    for v in basis:
        assert all(sum(row[j] * v[j] for j in range(cols)) == 0 for row in m)


def test_inverse_and_solve():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert matmul(a, inverse(a)) == identity(2)
    assert solve(a, [Fraction(3), Fraction(2)]) == [1, 1]
    assert solve([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]], [Fraction(1), Fraction(2)]) is None
