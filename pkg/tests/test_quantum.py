import numpy as np
import pytest

from algebra.errors import ContractViolation
from algebra.oscillator import resolve_params
from algebra.representations import PairRepresentation, subpair_representation
from algebra.scalars import as_array
from dynamics.quantum import (OperatorState, compare_with_conjugation, hidden_hamiltonian_audit, integrate_quantum,
                              quantum_rhs, relation_names, relation_residuals)


def test_relation_names():
    names = relation_names()
    assert len(names) == len(set(names)) == 18
    assert "PAQ-QAP" in names and "APB-BPA" in names and "QBR-RBQ" in names


def test_subpair_operators_satisfy_relations(params, oscillator):
    ops = OperatorState.from_representation(subpair_representation(params)).stack()
    residuals = relation_residuals(ops, oscillator.pair)
    assert all(not np.any(r != 0) for r in residuals.values())


def test_operator_state_shapes():
    with pytest.raises(ContractViolation):
        OperatorState(*(np.zeros((2, 2)) for _ in range(5)), np.zeros((3, 3)))


def test_hidden_hamiltonian_on_subpair(params):
    audit = hidden_hamiltonian_audit(subpair_representation(params), params)
    assert audit.classification == "confirmed"
    assert audit.report.residual == 0
    assert np.array_equal(audit.hamiltonian, as_array([[4, 0, 0], [0, 4, 0], [0, 0, 8]]))
    assert audit.renormalized
    assert audit.to_json()["classification"] == "confirmed"


def test_hidden_hamiltonian_needs_renormalized_pair():
    params = resolve_params(1, 3, 2)
    audit = hidden_hamiltonian_audit(subpair_representation(params), params)
    assert not audit.renormalized
    assert audit.classification == "not-applicable"
    assert audit.to_json()["classification"] == "not-applicable"


def test_rhs_is_the_heisenberg_flow(params):
    rep = subpair_representation(params)
    audit = hidden_hamiltonian_audit(rep, params)
    ops = OperatorState.from_representation(rep)
    flow = quantum_rhs(ops, params)
    h = audit.hamiltonian
    assert np.array_equal(flow.P, h @ ops.P - ops.P @ h)
    assert np.array_equal(flow.A, h @ ops.A - ops.A @ h)


def test_integration_keeps_relations(params):
    rep = subpair_representation(params)
    traj = integrate_quantum(rep, params, t_end=1.0, dt=1e-3, sample_every=10, keep_operators=True)
    assert traj.max_drift < 1e-6
    assert len(traj.rows()[0]) == 20
    p_final = traj.operators[-1][0]
    assert p_final[2, 0] == pytest.approx(np.exp(4.0), rel=1e-6)
    audit = hidden_hamiltonian_audit(rep, params)
    deviation, per_sample = compare_with_conjugation(traj, audit.hamiltonian)
    assert deviation < 1e-6
    assert per_sample.shape == traj.times.shape


def test_conjugation_needs_operators(params):
    rep = subpair_representation(params)
    traj = integrate_quantum(rep, params, t_end=0.1, dt=1e-2)
    with pytest.raises(ContractViolation):
        compare_with_conjugation(traj, np.eye(3))


def test_invalid_initial_operators(params):
    rep = subpair_representation(params)
    with pytest.raises(ContractViolation):
        integrate_quantum(rep, resolve_params(2, 3, 3), t_end=0.1, dt=1e-2)


def test_audit_needs_a_grading(params):
    rep = subpair_representation(params)
    ungraded = PairRepresentation(dim=rep.dim, t1=rep.t1, t2=rep.t2)
    with pytest.raises(ContractViolation):
        hidden_hamiltonian_audit(ungraded, params)


def test_audit_needs_split_shape(params):
    rep = subpair_representation(params)
    wrong = PairRepresentation(dim=rep.dim, t1=rep.t1, t2=rep.t2, grading=(1, 2))
    with pytest.raises(ContractViolation):
        hidden_hamiltonian_audit(wrong, params)


def test_operators_need_a_three_by_three_pair():
    rep = PairRepresentation(dim=2, t1=np.zeros((2, 2, 2)), t2=np.zeros((3, 2, 2)))
    with pytest.raises(ContractViolation):
        OperatorState.from_representation(rep)
