from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ksendo.errors import DomainError
from ksendo.exactfield import BaseField, build_tower, is_square_in_L, l_arith

from conftest import cubic_field

L = cubic_field()
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
elements = st.lists(coeff, min_size=3, max_size=3).map(L.element)
nonzero = elements.filter(lambda x: not x.is_zero())


def test_product_of_conjugates_is_minus_one():
    rho = L.gen()
    assert rho * rho.conj(1) * rho.conj(2) == -1
    assert rho.norm() == -1


def test_conjugates_are_roots_of_f():
    rho = L.gen()
    for k in range(3):
        x = rho.conj(k)
        assert x ** 3 - 3 * x + 1 == 0
    one = L.one()
    images = {rho.conj(1), rho.conj(2)}
    assert images == {one / (one - rho), one - one / rho}


def test_inverse_of_zero():
    with pytest.raises(DomainError):
        l_arith(L.zero(), op="inv")


def test_conjugation_composition_table():
    rho = L.gen()
    for i in range(3):
        for j in range(3):
            assert rho.conj(j).conj(i) == rho.conj(L.compose(i, j))


def test_reducible_polynomial_rejected():
    from ksendo.errors import ValidationError
    with pytest.raises(ValidationError):
        BaseField([-1, 0, 1], [[0, 1], [0, -1]])


def test_square_roots():
    Q = BaseField([0, 1])
    assert is_square_in_L(Q.scalar(3)) is None
    root = is_square_in_L(Q.scalar(4))
    assert root * root == 4
    rho = L.gen()
    r = is_square_in_L(rho * rho)
    assert r in (rho, -rho)
    assert is_square_in_L(rho) is None
    assert is_square_in_L(L.scalar(-1)) is None


def test_charpoly_of_generator():
    assert L.gen().charpoly() == [1, -3, 0, 1]


def test_tower_example_one():
    rho = L.gen()
    tower = build_tower(L, [rho.conj(k) for k in range(3)])
    assert tower.t == 3
    assert tower.degree == 24
    # sqrt(rho) sqrt(rho') sqrt(rho'') is a square root of -1
    prod = tower.sqrt(rho) * tower.sqrt(rho.conj(1)) * tower.sqrt(rho.conj(2))
    assert prod * prod == tower.lift(L.scalar(-1))
    minus_one = tower.sqrt(L.scalar(-1))
    assert prod in (minus_one, -minus_one)


def test_tower_example_three():
    rho = L.gen()
    a = 1
    tower = build_tower(L, [(rho + a).conj(k) for k in range(3)])
    assert tower.t == 4
    assert tower.degree == 48


def test_square_in_q_adds_nothing():
    Q = BaseField([0, 1])
    tower = build_tower(Q, [Q.scalar(4)], adjoin_minus_one=False)
    assert tower.t == 0
    assert tower.degree == 1


def test_relation_table_is_honoured():
    tower = build_tower(L, [L.element(c) for c in ([0, -1], [-2, 1, 1], [2, 0, -1])])
    assert tower.relations
    for u, mask, w in tower.relations:
        lhs = tower.sqrt(u)
        assert lhs * lhs == tower.lift(u)
        assert tower.monomial(mask, w) * tower.monomial(mask, w) == tower.lift(u)


@settings(max_examples=40, deadline=None)
@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == L.one()


@settings(max_examples=40, deadline=None)
@given(elements, elements, elements)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    for k in range(3):
        assert (a * b).conj(k) == a.conj(k) * b.conj(k)


@settings(max_examples=30, deadline=None)
@given(nonzero)
def test_square_root_of_a_square(a):
    sq = a * a
    r = is_square_in_L(sq)
    assert r is not None and r * r == sq


@settings(max_examples=15, deadline=None)
@given(nonzero, nonzero)
def test_tower_arithmetic(a, b):
    rho = L.gen()
    tower = build_tower(L, [rho.conj(k) for k in range(3)])
    x = tower.sqrt(rho) * tower.lift(a) + tower.lift(b)
    assert x * x.inverse() == tower.one()
    r = tower.sqrt(rho.conj(1))
    assert r * r == tower.lift(rho.conj(1))
    assert Fraction(1) * tower.one() == tower.one()
