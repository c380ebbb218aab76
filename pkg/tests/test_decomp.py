import pytest

from ksendo.decomp import (assemble_algebra, base_index, oracle_commutant_dim,
                           stabilizer_multiplicity)
from ksendo.errors import SizeLimit
from ksendo.exactfield import BaseField
from ksendo.spinweights import CM, TOTALLY_REAL, FormInput

from conftest import analysis


def test_example_one_structure():
    form, tower, group, factors, results, algebra = analysis("ex1")
    (fac,) = factors
    assert len(fac.orbit) == 1 and len(fac.stabilizer) == 24
    assert fac.n == 8 and fac.M == 256 and fac.center.name == "Q"


def test_example_two_orbits_and_centers():
    form, tower, group, factors, results, algebra = analysis("ex2")
    sizes = sorted(len(f.orbit) for f in factors)
    assert sizes == [2, 6]
    by_size = {len(f.orbit): f for f in factors}
    assert set(by_size[2].orbit) == {(1, 1, 1), (-1, -1, -1)}
    assert by_size[2].center.name == "Q(√-1)"
    assert by_size[6].center.name == "Q(√-1, ρ)"
    assert by_size[2].n == 4 and by_size[6].n == 4
    assert all(f.M == 256 for f in factors)


def test_example_three_structure():
    form, tower, group, factors, results, algebra = analysis("ex3")
    (fac,) = factors
    assert group.order == 48 and fac.n == 16
    assert stabilizer_multiplicity(form, group, _signs(form, group), fac.stabilizer) == 16


def _signs(form, group):
    from ksendo.spinweights import BlockSigns
    return BlockSigns(form, group)


def test_commutant_identity_is_embedded():
    for name in ("ex1", "ex2", "ex3", "ex4"):
        *_, algebra = analysis(name)
        assert algebra.commutant_dim == algebra.expected_commutant_dim


def test_base_index_shapes():
    Q = BaseField([0, 1])
    odd = FormInput(TOTALLY_REAL, Q, [Q.scalar(1)] * 5)
    assert base_index(odd) == ((1, 1, 1),)
    cm = FormInput(CM, Q, [Q.scalar(1)] * 3, Q.scalar(-1))
    assert base_index(cm) == (1,)


@pytest.mark.parametrize("diag", [[-1] * 5, [1, -2, 3, -5, 7]])
def test_oracle_full_orthogonal_algebra(diag):
    Q = BaseField([0, 1])
    form = FormInput(TOTALLY_REAL, Q, [Q.scalar(x) for x in diag])
    # odd rank: C+ is central simple of dimension 2^(m-1); its commutant is C+ again
    assert oracle_commutant_dim(form) == 16


def test_oracle_size_limit(L):
    form = FormInput(TOTALLY_REAL, L, [L.scalar(-1)] * 5)
    with pytest.raises(SizeLimit):
        oracle_commutant_dim(form)
