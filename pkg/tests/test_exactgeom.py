from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from oracles import det_cofactor, homogeneous_oracle, lcm_den, minor_gcd
from stellar.exactgeom import (GeometryError, NonIntegral, RationalSimplex, apply_affine,
                               bareiss_det, den, extend_to_basis, format_rational, from_homogeneous,
                               homogeneous, integer_affine_fit, is_regular, maximal_minor_gcd,
                               maximal_minor_gcd_bruteforce, mediant, parse_rational)


def test_den_examples():
    assert den((F(1, 2),)) == 2
    assert den((F(0), F(0))) == 1
    assert den((F(1, 2), F(2, 3))) == lcm_den((F(1, 2), F(2, 3))) == 6


def test_homogeneous_examples():
    assert homogeneous((F(1, 2),)) == (1, 2)
    assert homogeneous((F(0),)) == (0, 1)
    assert homogeneous((F(1, 2), F(2, 3))) == (3, 4, 6)


def test_is_regular_examples():
    assert is_regular([(F(0),), (F(1),)])
    assert not is_regular([(F(0),), (F(2, 3),)])
    assert is_regular([(F(0), F(0)), (F(1), F(0)), (F(1), F(1))])


def test_minor_gcd_examples():
    assert maximal_minor_gcd([[1, 0], [0, 1]]) == 1
    assert maximal_minor_gcd([[0, 1], [2, 3]]) == 2
    assert maximal_minor_gcd([[1, 0, 0], [0, 2, 0]]) == 2
    assert maximal_minor_gcd([[1, 2, 3], [2, 4, 6]]) == 0


def test_rational_strings():
    assert parse_rational("2/4") == F(1, 2)
    assert format_rational(F(3, 1)) == "3"
    assert format_rational(F(2, 6)) == "1/3"
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_degenerate_simplex_rejected():
    with pytest.raises(GeometryError):
        RationalSimplex([(F(0), F(0)), (F(1, 2), F(1, 2)), (F(1), F(1))])
    with pytest.raises(GeometryError):
        RationalSimplex([(F(0),), (F(0),)])


def test_mediant_is_homogeneous_sum():
    assert mediant((F(1, 3),), (F(1, 2),)) == (F(2, 5),)
    assert mediant((F(1, 2),), (F(1),)) == (F(2, 3),)


@given(st.lists(rationals(), min_size=1, max_size=4))
def test_homogeneous_roundtrip(coords):
    p = tuple(coords)
    h = homogeneous(p)
    assert h == homogeneous_oracle(p)
    from math import gcd
    from functools import reduce
    assert reduce(gcd, h) == 1
    assert from_homogeneous(h) == p


small_matrix = st.integers(1, 3).flatmap(
    lambda k: st.integers(k, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=k, max_size=k)))


@given(small_matrix)
def test_minor_gcd_matches_cofactor_oracle(rows):
    assert maximal_minor_gcd(rows) == minor_gcd(rows) == maximal_minor_gcd_bruteforce(rows)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_bareiss_matches_cofactor(m):
    assert bareiss_det(m) == det_cofactor(m)


@given(small_matrix, st.data())
def test_minor_gcd_invariant_under_unimodular_row_ops(rows, data):
    rows = [list(r) for r in rows]
    before = maximal_minor_gcd(rows)
    for _ in range(data.draw(st.integers(0, 6))):
        i = data.draw(st.integers(0, len(rows) - 1))
        j = data.draw(st.integers(0, len(rows) - 1))
        if i != j:
            q = data.draw(st.integers(-3, 3))
            rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
        else:
            rows[i] = [-a for a in rows[i]]
    assert maximal_minor_gcd(rows) == before


@given(st.permutations([(F(0), F(0)), (F(1), F(0)), (F(1), F(1))]), st.lists(rationals(6), min_size=2, max_size=2))
def test_is_regular_ignores_vertex_order(verts, extra):
    assert is_regular(verts)
    pts = [tuple(extra), (F(1), F(1))]
    if pts[0] != pts[1]:
        assert is_regular(pts) == is_regular(list(reversed(pts)))


def test_extend_to_basis_is_unimodular():
    rows = [[1, 2, 5]]
    basis = extend_to_basis(rows)
    assert abs(bareiss_det(basis)) == 1
    assert basis[0] == [1, 2, 5]


def test_integer_affine_fit():
    mat, off = integer_affine_fit([(F(0),), (F(1),)], [(F(0), F(0)), (F(1), F(1))])
    for x in (F(0), F(1, 3), F(1)):
        assert apply_affine(mat, off, (x,)) == (x, x)
    with pytest.raises(NonIntegral):
        integer_affine_fit([(F(0),), (F(1),)], [(F(0),), (F(1, 2),)])
