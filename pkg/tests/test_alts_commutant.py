from fractions import Fraction

import numpy as np
import pytest

from algebra.alts import to_alts, verify_alts
from algebra.commutant import (commutant_pair, double_commutant_contains, independent_subset, iso_commutant,
                               matrix_units, span_contains)
from algebra.diamond import diamond_bracket, is_lie
from algebra.errors import ContractViolation
from algebra.isotopic_pair import verify_isotopic_pair
from algebra.scalars import as_array, unit_vector, zeros
from algebra.superalgebra import hom_pair


def test_oscillator_alts_passes(oscillator):
    alts = to_alts(oscillator.pair)
    assert alts.n == 6
    assert alts.polarization == (3, 3)
    report = verify_alts(alts)
    assert report.passed
    assert [item.name for item in report.identities] == ["symmetry", "cyclic", "derivation", "polarization"]


def test_alts_part_and_r_operator(oscillator):
    alts = to_alts(oscillator.pair)
    assert [alts.part(i) for i in range(6)] == [1, 1, 1, 2, 2, 2]
    # R_{p,p} vanishes on a polarized system
    assert all(x == 0 for x in alts.r_operator(0, 0).flat)


def test_hom_pair_alts_passes():
    assert verify_alts(to_alts(hom_pair(2, 1))).passed


def test_broken_cyclic_identity_is_reported(oscillator):
    alts = to_alts(oscillator.pair)
    t = alts.t.copy()
    t[0, 3, 1, 1] = t[0, 3, 1, 1] + 1
    t[0, 1, 3, 1] = t[0, 1, 3, 1] + 1
    broken = type(alts)(n=alts.n, t=t, labels=alts.labels, polarization=alts.polarization)
    report = verify_alts(broken)
    assert not report.get("cyclic").passed
    assert report.get("cyclic").witness is not None


def test_commutant_of_full_matrix_algebra_is_everything():
    units = matrix_units(2)
    assert len(iso_commutant(units)) == 4
    assert double_commutant_contains(units)


def test_single_generator_has_full_commutant():
    e21 = as_array([[[0, 0], [1, 0]]])
    assert len(iso_commutant(e21)) == 4


def test_commutant_needs_generators():
    with pytest.raises(ContractViolation):
        iso_commutant(np.zeros((0, 2, 2), dtype=object))


def test_commutant_of_diagonal_matrices_is_diagonal():
    # E11 X E22 - E22 X E11 = x12 E12 - x21 E21 forces the off-diagonal entries to vanish
    diagonal = as_array([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    commutant = iso_commutant(diagonal)
    assert commutant.shape == (2, 2, 2)
    assert span_contains(diagonal, commutant)
    assert span_contains(commutant, diagonal)
    for a in diagonal:
        for b in diagonal:
            for x in commutant:
                assert span_contains(diagonal, (a @ x @ b - b @ x @ a)[None])
    assert double_commutant_contains(diagonal)


def test_commutant_of_upper_triangular_matrices():
    upper = as_array([[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    commutant = iso_commutant(upper)
    assert len(commutant) == 3
    assert span_contains(upper, commutant)
    assert not span_contains(commutant, as_array([[[0, 0], [1, 0]]]))
    assert double_commutant_contains(upper)


def test_commutant_pair_is_isotopic():
    e21 = as_array([[[0, 0], [1, 0]]])
    pair = commutant_pair(e21)
    assert (pair.n1, pair.n2) == (1, 4)
    assert verify_isotopic_pair(pair).passed


def test_independent_subset_drops_dependent_matrices():
    mats = as_array([[[1, 0], [0, 0]], [[2, 0], [0, 0]], [[0, 1], [0, 0]]])
    assert len(independent_subset(mats)) == 2
    with pytest.raises(ContractViolation):
        independent_subset(as_array([[1, 2, 3]]))


def test_span_contains():
    units = matrix_units(2)
    diagonal = as_array([[[1, 0], [0, 1]]])
    assert span_contains(units, diagonal)
    assert not span_contains(units[:1], diagonal)


def test_diamond_of_zero_brackets_is_zero():
    zero = zeros((2, 2, 2))
    out = diamond_bracket(zero, zero, unit_vector(2, 0))
    assert all(x == 0 for x in out.flat)


def test_diamond_of_equal_brackets_vanishes():
    # A ◊_Z A = 0 for any bracket
    br = zeros((3, 3, 3))
    br[0, 1, 2], br[1, 0, 2] = Fraction(1), Fraction(-1)
    out = diamond_bracket(br, br, unit_vector(3, 1))
    assert all(x == 0 for x in out.flat)


def test_diamond_shape_check():
    with pytest.raises(ContractViolation):
        diamond_bracket(zeros((2, 2, 2)), zeros((3, 3, 3)), unit_vector(2, 0))


def test_is_lie_flags_jacobi_failure():
    # [e1, e2] = e3, [e1, e3] = e3, [e2, e3] = e1 is not a Lie bracket
    br = zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (0, 2, 2), (1, 2, 0)):
        br[i, j, k] = Fraction(1)
        br[j, i, k] = Fraction(-1)
    report = is_lie(br)
    assert report.get("antisymmetry").passed
    assert not report.get("jacobi").passed
    assert np.all([isinstance(x, Fraction) for x in br.flat])
