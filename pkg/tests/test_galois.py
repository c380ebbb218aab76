import random

import pytest
from hypothesis import given, settings, strategies as st

from ksendo.exactfield import BaseField, build_tower
from ksendo.galois import (build_group, characters, fixed_field, orbit_and_stabilizer,
                           reynolds_square, squarefree_part)

from conftest import cubic_field

L = cubic_field()
RHO = L.gen()


def example_one_group():
    return build_group(build_tower(L, [RHO.conj(k) for k in range(3)]))


def example_three_group():
    return build_group(build_tower(L, [(RHO + 1).conj(k) for k in range(3)]))


G1 = example_one_group()


def test_example_one_order_and_shape():
    assert G1.order == 24
    assert not G1.is_abelian()
    # normal Klein-cube subgroup fixing L, cyclic quotient of order 3
    kernel = [g for g in range(24) if G1.elements[g].perm == 0]
    assert len(kernel) == 8
    assert all(G1.compose(a, a) == 0 for a in kernel)
    assert all(G1.compose(a, b) == G1.compose(b, a) for a in kernel for b in kernel)


def test_example_three_has_central_involution():
    G3 = example_three_group()
    assert G3.order == 48
    assert not G3.is_abelian()
    central = [z for z in range(1, 48)
               if G3.compose(z, z) == 0 and all(G3.compose(z, g) == G3.compose(g, z) for g in range(48))]
    assert central
    # some central involution splits off: a complement of order 24 avoiding it
    for z in central:
        others = [g for g in range(48) if g != z]
        comp = G3.closure([g for g in others if G3.elements[g].perm != 0][:1] +
                          [g for g in others if G3.elements[g].perm == 0 and g not in central][:3])
        if len(comp) == 24 and z not in comp:
            break
    else:
        pytest.fail("no complement to a central involution")


def test_generator_moves_root_of_rho_to_root_of_conjugate():
    tower = G1.tower
    sqrt_rho = tower.sqrt(RHO)
    target = tower.sqrt(RHO.conj(1))
    i = tower.sqrt(L.scalar(-1))
    hits = [g for g in G1.elements if g.perm == 1 and G1.apply(g, sqrt_rho) == target]
    assert hits
    # an order-3 lift fixes sqrt(-1) (it permutes the three roots whose product is +-sqrt(-1))
    order3 = [G1.index[g] for g in G1.elements if g.perm == 1
              and G1.compose(G1.index[g], G1.compose(G1.index[g], G1.index[g])) == 0]
    assert order3
    for g in order3:
        assert G1.apply(G1.elements[g], i) == i


def test_sign_flips_fix_l_and_negate_one_root():
    tower = G1.tower
    roots = [tower.sqrt(RHO.conj(k)) for k in range(3)]
    for k in range(3):
        found = [g for g in G1.elements if g.perm == 0
                 and all(G1.apply(g, roots[j]) == (-roots[j] if j == k else roots[j]) for j in range(3))]
        assert len(found) == 1
        assert G1.apply(found[0], RHO) == RHO


def test_identity_fixes_everything():
    x = G1.tower.sqrt(RHO) + G1.tower.lift(RHO)
    assert G1.apply(G1.identity, x) == x


def test_trivial_tower():
    Q = BaseField([0, 1])
    g = build_group(build_tower(Q, [], adjoin_minus_one=False))
    assert g.order == 1
    orbit, stab = orbit_and_stabilizer([0], g.compose, lambda a, x: x, "seed")
    assert orbit == ["seed"] and stab == [0]
    assert fixed_field(g, [0]).name == "Q"


def test_full_group_fixes_q():
    assert fixed_field(G1, range(24)).name == "Q"
    assert fixed_field(G1, range(24)).degree == 1


def test_fixed_field_of_kernel_is_quadratic_times_l():
    sub = [g for g in range(24) if G1.elements[g].perm == 0]
    desc = fixed_field(G1, sub)
    assert desc.degree == 3 and desc.full_l


def test_characters_are_homomorphisms():
    for chi in characters(G1):
        for a in range(24):
            for b in range(24):
                assert chi[G1.compose(a, b)] == (chi[a] + chi[b]) % 2


def test_reynolds_square_is_eigenvector():
    for chi in characters(G1):
        y = reynolds_square(G1, range(24), chi)
        for g in range(24):
            img = G1.apply(G1.elements[g], y)
            assert img == (-y if chi[g] else y)


def test_squarefree_part():
    assert squarefree_part(12) == 3
    assert squarefree_part(-8) == -2
    assert squarefree_part(1) == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 23), st.integers(0, 23), st.integers(0, 23))
def test_group_axioms(a, b, c):
    comp = G1.compose
    assert comp(comp(a, b), c) == comp(a, comp(b, c))
    assert comp(a, G1.inverse(a)) == 0
    assert comp(0, a) == a == comp(a, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 23), st.integers(0, 23), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_action_is_compatible_with_composition(a, b, coords):
    tower = G1.tower
    x = tower.sqrt(RHO) * tower.lift(L.element(coords)) + tower.radical(1)
    ga, gb = G1.elements[a], G1.elements[b]
    lhs = G1.apply(G1.elements[G1.compose(a, b)], x)
    assert lhs == G1.apply(ga, G1.apply(gb, x))
    y = tower.radical(0) + tower.one()
    assert G1.apply(ga, x * y) == G1.apply(ga, x) * G1.apply(ga, y)
