import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algebra.bunches import (Isorep, LieBunch, abelian, convert_isorep, enlarge_bunch, iso_pair, load_bunch,
                             load_isorep, load_lie_algebra, sl2, split_structure_check, standard_isorep,
                             two_dim_isorep, verify_bunch, verify_isorep, verify_lie_algebra, zero_bunch)
from algebra.diamond import diamond_bracket
from algebra.errors import ContractViolation, IncompleteBunchError, SingularMatrixError
from algebra.isotopic_pair import verify_isotopic_pair
from algebra.scalars import as_array, identity, unit_vector, zeros

STANDARD_SL2 = [[[0, 1], [0, 0]], [[1, 0], [0, -1]], [[0, 0], [1, 0]]]

nonzero = st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(lambda x: x != 0)
small_ints = st.integers(min_value=-3, max_value=3)


def _incomplete_bunch() -> LieBunch:
    g = abelian(2)
    brackets = zeros((2, 3, 3, 3), True)
    for a, i, j, k in ((0, 0, 1, 2), (1, 1, 2, 0)):
        brackets[a, i, j, k] = 1
        brackets[a, j, i, k] = -1
    return LieBunch(g=g, action=zeros((2, 3, 3), True), brackets=brackets)


def test_sl2_is_a_lie_algebra(data_dir):
    g = sl2()
    assert verify_lie_algebra(g).passed
    loaded = load_lie_algebra(data_dir / "sl2.json")
    assert loaded.labels == g.labels
    assert np.array_equal(loaded.structure, g.structure)


def test_iso_pair_of_sl2():
    assert verify_isotopic_pair(iso_pair(sl2())).passed


def test_zero_bunch_enlarges_to_iso_pair():
    g = sl2()
    enlarged = enlarge_bunch(zero_bunch(g))
    expected = iso_pair(g)
    assert (enlarged.n1, enlarged.n2) == (1, 3)
    assert np.array_equal(enlarged.m1, expected.m1)
    assert np.array_equal(enlarged.m2, expected.m2)


def test_sl2_bunch_on_c2(data_dir):
    bunch = load_bunch(data_dir / "bunch_sl2_c2.json")
    verification = verify_bunch(bunch)
    assert verification.report.passed
    assert verification.complete
    pair = enlarge_bunch(bunch, verification)
    assert pair.labels1 == ("v1", "v2", "1")
    assert verify_isotopic_pair(pair).passed


def test_incomplete_bunch():
    bunch = _incomplete_bunch()
    verification = verify_bunch(bunch)
    assert verification.report.passed
    assert not verification.complete
    assert verification.witness is not None
    assert verification.report.details["incomplete_at"] == list(verification.witness)
    with pytest.raises(IncompleteBunchError) as info:
        enlarge_bunch(bunch, verification)
    assert info.value.witness == verification.witness


def test_diamond_of_incomplete_bunch_leaves_the_family():
    bunch = _incomplete_bunch()
    composite = diamond_bracket(bunch.brackets[0], bunch.brackets[1], unit_vector(3, 1, True))
    assert list(composite[1, 2]) == [0, 0, -1]


def test_bunch_shape_checks():
    with pytest.raises(ContractViolation):
        LieBunch(g=sl2(), action=zeros((2, 2, 2), True), brackets=zeros((3, 2, 2, 2), True))


def test_two_dim_isorep(data_dir):
    iso = two_dim_isorep()
    report = verify_isorep(iso)
    assert report.passed
    assert report.flags["agrees_with_iso_pair"]
    loaded = load_isorep(data_dir / "isorep_two_dim.json")
    assert np.array_equal(loaded.q, iso.q) and np.array_equal(loaded.t, iso.t)
    assert loaded.grading == (1, 1)
    structure = split_structure_check(loaded)
    assert structure.report.passed
    assert structure.q_invertible
    assert structure.intertwiner_dimension == 1


def test_standard_isorep_of_sl2():
    iso = standard_isorep(sl2())
    assert iso.dim == 6 and iso.grading == (3, 3)
    report = verify_isorep(iso)
    assert report.passed and report.residual == 0
    structure = split_structure_check(iso)
    assert structure.report.passed
    assert structure.q_invertible
    assert structure.intertwiner_dimension == 1


def test_split_structure_report_rows():
    structure = split_structure_check(standard_isorep(sl2()))
    assert [item.name for item in structure.report.identities] == [
        "q_block_shape", "t_block_shape", "rho1_representation", "rho2_representation"]
    assert structure.report.details["intertwiner_dimension"] == 1


def test_rank_deficient_q_block():
    standard = standard_isorep(sl2())
    q = standard.q.copy()
    q[3, 0] = 0
    structure = split_structure_check(Isorep(g=standard.g, q=q, t=standard.t, grading=(3, 3)))
    assert not structure.q_invertible
    assert not structure.report.flags["q_invertible"]


def test_split_check_needs_grading():
    standard = standard_isorep(sl2())
    with pytest.raises(ContractViolation):
        split_structure_check(Isorep(g=standard.g, q=standard.q, t=standard.t))


def test_misplaced_t_block_is_reported():
    standard = standard_isorep(sl2())
    t = standard.t.copy()
    t[0, 4, 0] = 1
    structure = split_structure_check(Isorep(g=standard.g, q=standard.q, t=t, grading=(3, 3)))
    assert not structure.report.get("t_block_shape").passed


@given(nonzero)
@settings(max_examples=20, deadline=None)
def test_scaled_standard_representation_is_an_isorep(s):
    g = sl2()
    t = as_array(STANDARD_SL2, True) / s
    report = verify_isorep(Isorep(g=g, q=identity(2, True) * s, t=t))
    assert report.passed
    assert report.flags["agrees_with_iso_pair"]


@given(st.lists(small_ints, min_size=4, max_size=4), st.lists(small_ints, min_size=12, max_size=12))
@settings(max_examples=20, deadline=None)
def test_isorep_verdict_agrees_with_iso_pair(q_entries, t_entries):
    q = as_array(np.array(q_entries).reshape(2, 2).tolist(), True)
    t = as_array(np.array(t_entries).reshape(3, 2, 2).tolist(), True)
    assert verify_isorep(Isorep(g=sl2(), q=q, t=t)).flags["agrees_with_iso_pair"]


def test_convert_isorep_both_ways():
    g = sl2()
    s = 3
    rho = as_array(STANDARD_SL2, True)
    iso = Isorep(g=g, q=identity(2, True) * s, t=rho / s)
    forward = convert_isorep(iso)
    assert forward.report.passed
    assert np.array_equal(forward.plus, rho)
    backward = convert_isorep((g, rho), q=identity(2, True) * s)
    assert backward.report.passed
    assert np.array_equal(backward.plus.t, rho / s)


def test_convert_needs_invertible_q():
    g = sl2()
    rho = as_array(STANDARD_SL2, True)
    with pytest.raises(SingularMatrixError):
        convert_isorep((g, rho), q=zeros((2, 2), True))
    with pytest.raises(ContractViolation):
        convert_isorep((g, rho))
