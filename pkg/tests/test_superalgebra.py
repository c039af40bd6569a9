import pytest

from algebra.alts import to_alts
from algebra.errors import ContractViolation
from algebra.superalgebra import (build_super, hom_pair, is_abelian, is_ideal, quotient_superdimension,
                                  superalgebra_to_json, verify_super)

ABELIAN_IDEAL = ["R[p,c]", "R[q,c]"]
MIXED_IDEAL = ["R[p,c]", "R[q,c]", "r", "c"]


def test_oscillator_superalgebra_shape(oscillator):
    sa = oscillator.superalgebra
    assert sa.superdimension == (6, 6)
    assert sa.even.dim == 6
    assert sa.labels[6:] == ("p", "q", "r", "a", "b", "c")
    assert sa.parts[6:] == (1, 1, 1, 2, 2, 2)


def test_oscillator_superalgebra_passes(oscillator):
    report = verify_super(oscillator.superalgebra)
    assert report.passed
    assert report.details["superdimension"] == [6, 6]


def test_oscillator_ideals(oscillator):
    sa = oscillator.superalgebra
    g0 = list(sa.even.labels)
    assert is_abelian(sa, ABELIAN_IDEAL)
    assert is_ideal(sa, ABELIAN_IDEAL, ambient=g0)
    assert is_ideal(sa, MIXED_IDEAL)
    assert quotient_superdimension(sa, MIXED_IDEAL) == (4, 4)


def test_odd_part_is_not_abelian(oscillator):
    sa = oscillator.superalgebra
    assert not is_abelian(sa, ["p", "a"])
    assert not is_ideal(sa, ["p"])


def test_ideal_needs_subset_of_ambient(oscillator):
    sa = oscillator.superalgebra
    with pytest.raises(ContractViolation):
        is_ideal(sa, ["p"], ambient=list(sa.even.labels))


def test_unknown_label(oscillator):
    with pytest.raises(KeyError):
        oscillator.superalgebra.index("z")


@pytest.mark.parametrize("n,m,expected", [(1, 1, (0, 2)), (2, 1, (4, 4)), (2, 2, (6, 8))])
def test_hom_pair_superdimension(n, m, expected):
    sa = build_super(to_alts(hom_pair(n, m)))
    assert sa.superdimension == expected
    assert verify_super(sa).passed


def test_hom_pair_rejects_empty_space():
    with pytest.raises(ContractViolation):
        hom_pair(0, 1)


def test_superalgebra_json_lists_nonzero_cells(oscillator):
    doc = superalgebra_to_json(oscillator.superalgebra)
    assert doc["superdimension"] == [6, 6]
    assert len(doc["labels"]) == 12
    assert all(value != 0 for *_, value in doc["structure"])
