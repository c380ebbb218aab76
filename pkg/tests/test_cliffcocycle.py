from fractions import Fraction

import pytest

from ksendo.clifford import Clifford, swap_count
from ksendo.cliffcocycle import (DescentData, block_lambda, build_lambda, build_m_matrices,
                                 check_lambda_consistency, closed_form_lambda,
                                 composition_constants, extract_cocycle, verify_cocycle)
from ksendo.decomp import base_index

from conftest import analysis


def test_swap_count_is_inversion_parity():
    assert swap_count([3, 1, 2], [1, 2, 3]) == 2
    assert swap_count(["a", "b"], ["a", "b"]) == 0


def test_generators_anticommute_to_the_form():
    l, odd = 2, True
    x1 = Clifford.generator(l, odd, 1, 1)
    y1 = Clifford.generator(l, odd, 1, -1)
    x2 = Clifford.generator(l, odd, 2, 1)
    assert (x1 * x2 + x2 * x1).is_zero()
    assert (x1 * x1).is_zero()
    anti = x1 * y1 + y1 * x1
    assert not anti.is_zero()
    z = Clifford.generator(l, odd, 0, 1)
    assert z * z == Clifford.scalar(l, odd)


@pytest.mark.parametrize("l,odd", [(1, False), (2, False), (2, True), (3, False), (3, True)])
def test_forced_coefficients_give_matrix_units(l, odd):
    table, scale = block_lambda(l, odd)
    kappa = composition_constants(l, odd)
    labels = sorted({a for a, _ in table})
    ref = tuple([1] * (l + int(odd)))
    for a in labels:
        assert table[(ref, a)].single() == (1, (0,) * l)
        for b in labels:
            for c in labels:
                lhs = table[(a, b)] * table[(b, c)] * kappa[(a, b, c)]
                coeff, exps = table[(a, c)].single()
                assert lhs.single() == (coeff * scale, exps)


@pytest.mark.parametrize("l,odd", [(2, False), (3, False), (2, True), (3, True)])
def test_closed_form_matches_up_to_rational_factor(l, odd):
    forced, _ = block_lambda(l, odd)
    closed = closed_form_lambda(l, odd)
    ratios = set()
    for key in forced:
        assert forced[key].single()[1] == closed[key].single()[1]
        ratios.add(forced[key].single()[0] / closed[key].single()[0])
    assert all(abs(r).numerator & (abs(r).numerator - 1) == 0 and r.denominator == 1 for r in ratios)
    if not odd:
        assert all(r > 0 for r in ratios)


def _cocycle(name, reference=None):
    form, tower, group, factors, results, algebra = analysis(name)
    fac = factors[0]
    table = build_lambda(form, fac.index_set, reference)
    descent = DescentData(form, group, _signs(name), table, fac.stabilizer, fac.representative)
    return form, fac, table, descent, build_m_matrices(descent)


_SIGNS = {}


def _signs(name):
    from ksendo.spinweights import BlockSigns
    if name not in _SIGNS:
        form, tower, group, *_ = analysis(name)
        _SIGNS[name] = BlockSigns(form, group)
    return _SIGNS[name]


def test_normalization_and_consistency():
    form, fac, table, descent, mats = _cocycle("ex1")
    ref = table.reference
    assert ref == base_index(form)
    assert all(table.values[(ref, b)] == 1 for b in table.indices)
    assert check_lambda_consistency(form, table)


def test_identity_matrix_and_unit_cocycle_values():
    form, fac, table, descent, mats = _cocycle("ex1")
    m_e = mats[0]
    assert all(m_e.target[i] == i for i in table.indices)
    assert all(descent.evaluate(m_e.coeff[i]) == 1 for i in table.indices)
    cocycle = extract_cocycle(descent, mats)
    for g in fac.stabilizer:
        assert cocycle(0, g) == 1 and cocycle(g, 0) == 1


def test_values_lie_in_l_and_satisfy_cocycle_identity():
    form, fac, table, descent, mats = _cocycle("ex1")
    cocycle = extract_cocycle(descent, mats)
    assert verify_cocycle(cocycle)
    assert all(v.field is form.base for v in cocycle.values.values())


def test_formal_values_match_exact_values():
    form, fac, table, descent, mats = _cocycle("ex1")
    cocycle = extract_cocycle(descent, mats)
    for key, formal in cocycle.formal.items():
        assert descent.evaluate(formal) == cocycle.values[key]


def test_corrupted_cocycle_is_detected():
    form, fac, table, descent, mats = _cocycle("ex1")
    cocycle = extract_cocycle(descent, mats)
    g = fac.stabilizer[5]
    cocycle.values[(g, g)] = cocycle.values[(g, g)] * 3
    assert not verify_cocycle(cocycle)
