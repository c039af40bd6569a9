"""
Quantum dynamics of the coupled oscillators in a representation of the pair.

The operators P̂, Q̂, R̂ (images of p, q, r) and Â, B̂, Ĉ (images of a, b, c)
evolve by the cubic equations in `quantum_rhs`. The relations of the pair,
e.g. P̂ÂQ̂ - Q̂ÂP̂ = 2ε1 Q̂, are monitored along the flow.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import expm

from algebra.errors import ContractViolation
from algebra.isotopic_pair import IsotopicPair
from algebra.oscillator import EpsilonParams, V1_LABELS, V2_LABELS, build_pair
from algebra.reports import AxiomReport
from algebra.representations import PairRepresentation, verify_representation
from algebra.scalars import DEFAULT_TOL, is_exact, max_abs, to_float, zeros
from dynamics.integrators import rk4_integrate

OPERATOR_NAMES = ("P", "Q", "R", "A", "B", "C")
HAMILTONIAN_TERMS = (("q", "a"), ("p", "b"), ("q", "b"), ("p", "a"), ("p", "c"), ("q", "c"))


@dataclass
class OperatorState:
    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        shape = self.P.shape
        for name in OPERATOR_NAMES:
            mat = getattr(self, name)
            if mat.ndim != 2 or mat.shape != shape or shape[0] != shape[1]:
                raise ContractViolation(f"operator {name} has shape {mat.shape}, expected square {shape}")

    @classmethod
    def from_stack(cls, stack: np.ndarray, t: float = 0.0) -> "OperatorState":
        return cls(*stack, t=t)

    @classmethod
    def from_representation(cls, rep: PairRepresentation) -> "OperatorState":
        if rep.t1.shape[0] != 3 or rep.t2.shape[0] != 3:
            raise ContractViolation("oscillator operators need a representation of a 3|3 pair")
        return cls(*rep.t1, *rep.t2)

    def stack(self) -> np.ndarray:
        mats = [getattr(self, name) for name in OPERATOR_NAMES]
        if is_exact(mats[0]):
            out = zeros((6,) + mats[0].shape, True)
            for k, mat in enumerate(mats):
                out[k] = mat
            return out
        return np.array(mats, dtype=float)


def _rhs_stack(ops: np.ndarray, eps) -> np.ndarray:
    e1, e2, e3, t1, t2, t3 = eps
    P, Q, R, A, B, C = ops
    dP = -2 * e1 * (P @ B @ Q + Q @ B @ P + 2 * (Q @ A @ Q)) - e3 * (R @ C @ Q + Q @ C @ R)
    dQ = 2 * e1 * (P @ A @ Q + Q @ A @ P + 2 * (P @ B @ P)) + e3 * (R @ C @ P + P @ C @ R)
    dR = e2 * (P @ A @ R + R @ A @ P - Q @ B @ R - R @ B @ Q)
    dA = -2 * t1 * (A @ Q @ B + B @ Q @ A + 2 * (B @ P @ B)) - t3 * (C @ R @ B + B @ R @ C)
    dB = 2 * t1 * (A @ P @ B + B @ P @ A + 2 * (A @ Q @ A)) + t3 * (C @ R @ A + A @ R @ C)
    dC = t2 * (A @ P @ C + C @ P @ A - B @ Q @ C - C @ Q @ B)
    out = np.empty_like(ops)
    for k, d in enumerate((dP, dQ, dR, dA, dB, dC)):
        out[k] = d
    return out


def quantum_rhs(ops: OperatorState, params: EpsilonParams) -> OperatorState:
    stack = ops.stack()
    eps = params.values() if is_exact(stack) else params.as_floats().values()
    return OperatorState.from_stack(_rhs_stack(stack, eps), t=ops.t)


def _pair_for(params: EpsilonParams, exact: bool) -> IsotopicPair:
    return build_pair(params if exact else params.as_floats()).pair


def _name(first: str, middle: str, last: str) -> str:
    return f"{first}{middle}{last}-{last}{middle}{first}".upper()


def relation_names() -> List[str]:
    """The 18 relations, spelled like "PAQ-QAP" (X < Y in V1) and "APB-BPA" (A < B in V2)"""
    names = [_name(V1_LABELS[x], V2_LABELS[a], V1_LABELS[y])
             for x in range(3) for y in range(x + 1, 3) for a in range(3)]
    names += [_name(V2_LABELS[a], V1_LABELS[x], V2_LABELS[b])
              for a in range(3) for b in range(a + 1, 3) for x in range(3)]
    return names


def relation_residuals(ops: np.ndarray, pair: IsotopicPair) -> Dict[str, np.ndarray]:
    """
    Residual matrices of the 18 oscillator relations, right-hand sides taken
    from the structure constants of `pair`
    """
    t1, t2 = ops[:3], ops[3:]
    out = {}
    for x in range(3):
        for y in range(x + 1, 3):
            for a in range(3):
                lhs = t1[x] @ t2[a] @ t1[y] - t1[y] @ t2[a] @ t1[x]
                rhs = np.einsum("k,kij->ij", pair.m1[a, x, y], t1)
                out[_name(V1_LABELS[x], V2_LABELS[a], V1_LABELS[y])] = lhs - rhs
    for a in range(3):
        for b in range(a + 1, 3):
            for x in range(3):
                lhs = t2[a] @ t1[x] @ t2[b] - t2[b] @ t1[x] @ t2[a]
                rhs = np.einsum("k,kij->ij", pair.m2[x, a, b], t2)
                out[_name(V2_LABELS[a], V1_LABELS[x], V2_LABELS[b])] = lhs - rhs
    return out


@dataclass
class QuantumTrajectory:
    times: np.ndarray
    relation_names: List[str]
    relation_norms: np.ndarray
    operators: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def max_drift(self) -> float:
        return float(np.max(self.relation_norms)) if self.relation_norms.size else 0.0

    def rows(self) -> List[List[float]]:
        """t, one column per relation, then the row maximum"""
        worst = np.max(self.relation_norms, axis=1) if self.relation_norms.size else np.zeros(len(self.times))
        return np.column_stack([self.times, self.relation_norms, worst]).tolist()


def integrate_quantum(rep: PairRepresentation, params: EpsilonParams, t_end: float, dt: float,
                      sample_every: int = 1, keep_operators: bool = False,
                      tol: float = DEFAULT_TOL) -> QuantumTrajectory:
    """
    RK4 on the operator equations starting from the representation matrices,
    with the max-abs residual of every relation recorded per sample

    Raises:
        ContractViolation: when the initial operators violate the relations
        IntegrationError: on NaN or overflow
    """
    pair = _pair_for(params, rep.exact)
    report = verify_representation(rep, pair, tol)
    if not report.flags["valid"]:
        worst = report.failures()[0]
        raise ContractViolation(f"initial operators violate {worst.name} at {' '.join(worst.witness or ())}")
    fpair = _pair_for(params, False)
    eps = params.as_floats().values()
    y0 = to_float(OperatorState.from_representation(rep).stack())
    times, samples = rk4_integrate(lambda y: _rhs_stack(y, eps), y0, t_end, dt, sample_every)
    names = relation_names()
    norms = np.zeros((len(times), len(names)))
    for i, ops in enumerate(samples):
        residuals = relation_residuals(ops, fpair)
        norms[i] = [float(np.max(np.abs(residuals[name]))) for name in names]
    return QuantumTrajectory(times=times, relation_names=names, relation_norms=norms,
                             operators=samples if keep_operators else None)


def even_images(ops: np.ndarray) -> Dict[str, np.ndarray]:
    """R̂_{x,α} = T(x)T(α) + T(α)T(x) for the six terms of the hidden hamiltonian"""
    index = {label: k for k, label in enumerate(V1_LABELS + V2_LABELS)}
    return {f"R[{x},{a}]": ops[index[x]] @ ops[index[a]] + ops[index[a]] @ ops[index[x]]
            for x, a in HAMILTONIAN_TERMS}


def hidden_hamiltonian(ops: np.ndarray) -> np.ndarray:
    images = list(even_images(ops).values())
    total = images[0] @ images[0]
    for image in images[1:]:
        total = total + image @ image
    return total


@dataclass
class HiddenHamiltonianAudit:
    report: AxiomReport
    hamiltonian: np.ndarray
    residuals: Dict[str, np.ndarray]
    renormalized: bool

    @property
    def classification(self) -> str:
        """Only a pair with ε2 = ε3 (after `renormalize_rc`) is expected to follow Ĥ"""
        if not self.renormalized:
            return "not-applicable"
        return "confirmed" if self.report.passed else "residual nonzero"

    def to_json(self) -> dict:
        out = self.report.to_json()
        out["classification"] = self.classification
        out["renormalized"] = self.renormalized
        return out


def hidden_hamiltonian_audit(rep: PairRepresentation, params: EpsilonParams,
                             tol: float = DEFAULT_TOL) -> HiddenHamiltonianAudit:
    """
    Compare the operator equations with the Heisenberg flow of
    Ĥ = sum of R̂² over HAMILTONIAN_TERMS, generator by generator, at t = 0

    Raises:
        ContractViolation: when the representation is not split
    """
    if rep.grading is None:
        raise ContractViolation("the audit needs a split representation (no grading declared)")
    pair = _pair_for(params, rep.exact)
    shape = verify_representation(rep, pair, tol)
    if not shape.flags["split"]:
        raise ContractViolation("the representation is not split")
    ops = OperatorState.from_representation(rep).stack()
    eps = params.values() if rep.exact else params.as_floats().values()
    h = hidden_hamiltonian(ops)
    flow = _rhs_stack(ops, eps)
    report = AxiomReport(subject="hidden hamiltonian", exact=rep.exact, tol=tol)
    residuals = {}
    for k, label in enumerate(V1_LABELS + V2_LABELS):
        residual = flow[k] - (h @ ops[k] - ops[k] @ h)
        residuals[label] = residual
        report.add_value(f"heisenberg_{label}", max_abs(residual), witness=(label,))
    report.flags["relations_valid"] = shape.flags["valid"]
    e1, e2, e3, t1, t2, t3 = params.values()
    renormalized = e2 == e3
    report.flags["renormalized"] = renormalized
    return HiddenHamiltonianAudit(report=report, hamiltonian=h, residuals=residuals, renormalized=renormalized)


def conjugation_flow(ops: np.ndarray, hamiltonian: np.ndarray, times: np.ndarray) -> np.ndarray:
    """F(t) = exp(tĤ) F(0) exp(-tĤ) for each operator and sample time"""
    ops = to_float(ops)
    h = to_float(hamiltonian)
    out = np.zeros((len(times),) + ops.shape)
    for i, t in enumerate(times):
        forward, backward = expm(t * h), expm(-t * h)
        out[i] = np.einsum("ij,kjl,lm->kim", forward, ops, backward)
    return out


def compare_with_conjugation(traj: QuantumTrajectory, hamiltonian: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Max deviation between the integrated operators and the conjugation flow

    Returns:
        (max deviation, per-sample deviation)
    """
    if traj.operators is None:
        raise ContractViolation("the trajectory was integrated without keep_operators")
    exact_flow = conjugation_flow(traj.operators[0], hamiltonian, traj.times)
    per_sample = np.max(np.abs(traj.operators - exact_flow).reshape(len(traj.times), -1), axis=1)
    return float(np.max(per_sample)), per_sample
