from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from algebra.alts import to_alts, verify_alts
from algebra.errors import ParameterError
from algebra.isotopic_pair import verify_anti_jordan, verify_isotopic_pair
from algebra.oscillator import (EpsilonParams, audit_structure_table, build_pair, params_from_json, r_matrices,
                                renormalize_rc, resolve_params)
from algebra.superalgebra import build_super

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
nonzero = rationals.filter(lambda x: x != 0)


def test_resolve_params():
    params = resolve_params(1, 3, 3)
    assert params.values() == (1, 3, 3, -1, 1, 1)
    assert params.exact
    assert all(v == 0 for v in params.constraint_residuals().values())


def test_resolve_params_from_strings():
    params = resolve_params("1/2", "3", "3/2")
    assert params.teps1 == Fraction(-1, 2)
    assert params.teps2 == 2
    assert params.teps3 == 4


@pytest.mark.parametrize("eps", [(1, 0, 3), (1, 3, 0)])
def test_resolve_params_rejects_zero(eps):
    with pytest.raises(ParameterError):
        resolve_params(*eps)


def test_build_pair_rejects_constraint_violation():
    with pytest.raises(ParameterError):
        build_pair(EpsilonParams(1, 3, 3, 1, 1, 1))


def test_params_from_json():
    assert params_from_json({"eps1": 1, "eps2": "3", "eps3": 3}) == resolve_params(1, 3, 3)
    six = params_from_json({"eps1": 1, "eps2": 3, "eps3": 3, "teps1": -1, "teps2": 1, "teps3": 1})
    assert six.values() == (1, 3, 3, -1, 1, 1)


def test_degeneracies():
    assert resolve_params(1, 3, 3).degeneracies == ()
    assert "eps1" in resolve_params(0, 1, 1).degeneracies


@given(rationals, nonzero, nonzero)
@settings(max_examples=50, deadline=None)
def test_random_parameters_give_exact_pairs(e1, e2, e3):
    pair = build_pair(resolve_params(e1, e2, e3)).pair
    report = verify_isotopic_pair(pair)
    assert report.passed and report.residual == 0
    assert verify_anti_jordan(pair).passed


@given(rationals, nonzero, nonzero)
@settings(max_examples=10, deadline=None)
def test_random_parameters_give_alts(e1, e2, e3):
    assert verify_alts(to_alts(build_pair(resolve_params(e1, e2, e3)).pair)).passed


@given(rationals, nonzero, nonzero)
@settings(max_examples=50, deadline=None)
def test_generic_parameters_give_six_dimensional_g0(e1, e2, e3):
    params = resolve_params(e1, e2, e3)
    assume(not params.degeneracies)
    alts = to_alts(build_pair(params).pair)
    even = build_super(alts).even
    assert even.dim == 6
    assert set(even.labels) == {"R[p,a]", "R[p,b]", "R[p,c]", "R[q,a]", "R[q,b]", "R[q,c]"}
    ratio = params.eps2 / params.eps3
    p, q, r, a, b, c = range(6)
    assert np.array_equal(alts.r_operator(r, b), ratio * alts.r_operator(p, c))
    assert np.array_equal(alts.r_operator(r, a), ratio * alts.r_operator(q, c))


def test_float_parameters():
    osc = build_pair(resolve_params(0.5, 1.5, 2.0))
    assert not osc.pair.exact
    assert verify_isotopic_pair(osc.pair).passed


def test_r_matrices_match_printed_blocks(params):
    audit = r_matrices(params)
    assert audit.consistent
    assert set(audit.computed) >= {"R[p,c]", "R[q,c]"}


def test_structure_table_audit(params):
    lines = audit_structure_table(params)
    assert lines
    assert {line.status for line in lines} <= {"match", "mismatch", "not-comparable"}
    mismatched = [line for line in lines if line.status == "mismatch"]
    assert any("R[p,a]" in line.line and "R[p,b]" in line.line for line in mismatched)
    assert all(line.computed is not None for line in mismatched)


def test_structure_table_audit_validates_couplings():
    with pytest.raises(ParameterError):
        audit_structure_table(EpsilonParams(1, 3, 3, 1, 1, 1))


def test_renormalized_pair():
    osc = build_pair(resolve_params(1, 3, 2))
    renormalized = renormalize_rc(osc)
    assert renormalized.params.eps3 == renormalized.params.eps2
    assert renormalized.params.teps3 == renormalized.params.teps2
    assert verify_isotopic_pair(renormalized.pair).passed
