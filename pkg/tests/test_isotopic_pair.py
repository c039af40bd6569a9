from fractions import Fraction

import numpy as np
import pytest

from algebra.errors import AxiomViolation, ContractViolation
from algebra.isotopic_pair import (V1, IsotopicPair, isobracket, restrict_pair, rescale_basis, verify_anti_jordan,
                                   verify_isotopic_pair)
from algebra.scalars import to_float, unit_vector
from algebra.superalgebra import hom_pair


def test_oscillator_pair_passes_exactly(oscillator):
    report = verify_isotopic_pair(oscillator.pair)
    assert report.passed
    assert report.residual == 0
    names = [item.name for item in report.identities]
    assert "compatibility_V1" in names and "compatibility_V2" in names
    assert "polarized_jacobi_V1" in names and "jacobi_V2" in names


def test_oscillator_pair_is_anti_jordan(oscillator):
    assert verify_anti_jordan(oscillator.pair).passed


def test_isobracket_reads_structure_constants(oscillator):
    pair = oscillator.pair
    a, p, q = unit_vector(3, 0), unit_vector(3, 0), unit_vector(3, 1)
    # [p, q]_a = 2ε1 q
    assert list(isobracket(pair, V1, a, p, q)) == [0, 2, 0]


def test_isobracket_rejects_wrong_shapes(oscillator):
    with pytest.raises(ContractViolation):
        isobracket(oscillator.pair, V1, unit_vector(2, 0), unit_vector(3, 0), unit_vector(3, 1))


def test_broken_antisymmetry_fails_with_witness(oscillator):
    m1 = oscillator.pair.m1.copy()
    m1[0, 0, 1, 1] = m1[0, 0, 1, 1] + 1
    broken = IsotopicPair(n1=3, n2=3, m1=m1, m2=oscillator.pair.m2.copy(),
                          labels1=oscillator.pair.labels1, labels2=oscillator.pair.labels2)
    report = verify_isotopic_pair(broken)
    assert not report.passed
    item = report.get("antisymmetry_V1")
    assert not item.passed
    assert item.witness == ("A=a", "X=p", "Y=q")


def test_float_backend_within_tolerance(oscillator):
    pair = oscillator.pair
    fpair = IsotopicPair(n1=3, n2=3, m1=to_float(pair.m1), m2=to_float(pair.m2))
    report = verify_isotopic_pair(fpair)
    assert not report.exact
    assert report.passed


def test_shape_mismatch_is_a_contract_violation():
    with pytest.raises(ContractViolation):
        IsotopicPair(n1=2, n2=1, m1=np.zeros((1, 2, 2, 2)), m2=np.zeros((2, 2, 2, 2)))


def test_restrict_to_closed_subpair(oscillator):
    sub = restrict_pair(oscillator.pair, [0, 1], [0, 1])
    assert (sub.n1, sub.n2) == (2, 2)
    assert sub.labels1 == ("p", "q") and sub.labels2 == ("a", "b")
    assert verify_isotopic_pair(sub).passed


def test_restrict_rejects_open_subset(oscillator):
    # [p, q]_c = ε3 r leaves span(p, q)
    with pytest.raises(AxiomViolation):
        restrict_pair(oscillator.pair, [0, 1], [0, 1, 2])


def test_rescaled_pair_stays_valid(oscillator):
    scaled = rescale_basis(oscillator.pair, [Fraction(2), 1, Fraction(1, 3)], [1, Fraction(-5), 7])
    assert verify_isotopic_pair(scaled).passed


def test_rescale_rejects_zero_scale(oscillator):
    with pytest.raises(ContractViolation):
        rescale_basis(oscillator.pair, [0, 1, 1], [1, 1, 1])


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1)])
def test_hom_pair_is_isotopic(n, m):
    pair = hom_pair(n, m)
    assert (pair.n1, pair.n2) == (n * m, n * m)
    assert verify_isotopic_pair(pair).passed
    assert verify_anti_jordan(pair).passed
