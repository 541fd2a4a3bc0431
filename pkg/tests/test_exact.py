from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperpencil.exact import (
    DegenerateInputError,
    RatPoly,
    discriminant,
    is_square_rational,
    is_squarefree,
    poly_eval,
    rational_roots,
    resultant,
)
from oracles import root_product_disc, sylvester_resultant

SEXTIC = RatPoly.from_roots([0, 2, 6, 8, 12, 20])

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def polys(max_degree=6):
    return st.lists(rationals, min_size=1, max_size=max_degree + 1).map(RatPoly)


def test_poly_eval_examples():
    assert poly_eval(RatPoly([-1, 0, 1]), 1) == 0
    assert poly_eval(SEXTIC, 1) == -7315
    assert poly_eval(RatPoly(), 5) == 0


def test_poly_eval_matches_product_of_factors():
    assert poly_eval(SEXTIC, 1) == 1 * (1 - 2) * (1 - 6) * (1 - 8) * (1 - 12) * (1 - 20)


def test_resultant_examples():
    assert resultant(RatPoly([-3, 1]), RatPoly([-1, 0, 1])) == 8
    assert resultant(RatPoly([-1, 0, 1]), RatPoly([-4, 0, 1])) == 9
    assert resultant(RatPoly([0, 1]), RatPoly([0, 1])) == 0


def test_resultant_both_zero_raises():
    with pytest.raises(DegenerateInputError):
        resultant(RatPoly(), RatPoly())


def test_resultant_sign_convention_by_roots():
    # lc(P)^deg Q * prod Q(alpha): P = -7/4 x + 2 has the single root 8/7
    p = RatPoly(["2", "-7/4"])
    q = RatPoly([0, -6, "5/2", "-1/4"])
    expected = Fraction(-7, 4) ** 3 * poly_eval(q, Fraction(8, 7))
    assert resultant(p, q) == expected


@settings(max_examples=200, deadline=None)
@given(polys(), polys())
def test_resultant_matches_sylvester_determinant(p, q):
    if p.is_zero() or q.is_zero() or p.degree + q.degree == 0:
        return
    assert resultant(p, q) == sylvester_resultant(p.coeffs, q.coeffs)


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_resultant_is_multiplicative(p, r, q):
    if p.is_zero() or r.is_zero() or q.is_zero():
        return
    assert resultant(p * r, q) == resultant(p, q) * resultant(r, q)


def test_discriminant_examples():
    assert discriminant(RatPoly([-1, 0, 1])) == 4
    assert discriminant(RatPoly([0, 0, 1])) == 0
    assert discriminant(SEXTIC) == 2**48 * 3**14 * 5**4 * 7**2
    assert discriminant(SEXTIC) == root_product_disc([0, 2, 6, 8, 12, 20])


def test_discriminant_quadratic_formula():
    for b, c in [(3, 2), (-5, 7), (Fraction(1, 2), Fraction(-3, 5))]:
        assert discriminant(RatPoly([c, b, 1])) == Fraction(b) ** 2 - 4 * Fraction(c)


def test_discriminant_of_constant_raises():
    with pytest.raises(DegenerateInputError):
        discriminant(RatPoly([5]))


@settings(max_examples=150, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=7, unique=True),
       st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda x: x != 0))
def test_discriminant_of_split_poly(roots, lead):
    p = RatPoly.from_roots(roots, lead)
    assert discriminant(p) == root_product_disc(roots, lead)


def test_is_squarefree_examples():
    assert is_squarefree(RatPoly([-1, 0, 1]))
    assert not is_squarefree(RatPoly([0, 0, 1]))
    assert is_squarefree(SEXTIC)
    assert not is_squarefree(RatPoly.from_roots([1, 1, 3]))


def test_rational_roots_examples():
    assert rational_roots(RatPoly([-1, 0, 1])) == [-1, 1]
    assert rational_roots(RatPoly([1, 0, 1])) == []
    assert rational_roots(SEXTIC) == [0, 2, 6, 8, 12, 20]


@settings(max_examples=100, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=5))
def test_rational_roots_recovers_constructed_roots(roots):
    # multiply by an irreducible quadratic so non-rational roots are present
    p = RatPoly.from_roots(roots) * RatPoly([2, 0, 1])
    assert rational_roots(p) == sorted(set(roots))


def test_is_square_rational_examples():
    assert is_square_rational(Fraction(9, 4)) == Fraction(3, 2)
    assert is_square_rational(2) is None
    assert is_square_rational(0) == 0
    assert is_square_rational(-4) is None


@settings(max_examples=300, deadline=None)
@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=1000))
def test_is_square_rational_agrees_with_search(r):
    root = is_square_rational(r)
    if root is not None:
        assert root >= 0 and root * root == r
    else:
        # no rational root: r < 0 or one of num/den is not an integer square
        n, d = r.numerator, r.denominator
        assert r < 0 or not any(k * k == n for k in range(0, 1001)) or \
            not any(k * k == d for k in range(1, 33))


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**6))
def test_square_of_rational_is_detected(r):
    assert is_square_rational(r * r) == r


def test_ratpoly_is_immutable_and_trims():
    p = RatPoly([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert RatPoly([0, 0]).is_zero()
    with pytest.raises(AttributeError):
        p.coeffs = ()
    with pytest.raises(DegenerateInputError):
        RatPoly().degree


def test_ratpoly_pickles():
    import pickle

    assert pickle.loads(pickle.dumps(SEXTIC)) == SEXTIC
