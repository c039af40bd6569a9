"""
Classical dynamics of the coupled oscillators.

With the "hamiltonians" H1 = P^2 + Q^2 and H2 = A^2 + B^2 the flow is

    P' = -4ε1 (Q²A + PQB) - 2ε3 RQC      A' = -4ε̃1 (B²P + ABQ) - 2ε̃3 CBR
    Q' =  4ε1 (PQA + P²B) + 2ε3 RPC      B' =  4ε̃1 (ABP + A²Q) + 2ε̃3 CAR
    R' =  2ε2 (PRA - QRB)                C' =  2ε̃2 (ACP - BCQ)

Integrals of motion: I1² = P² + Q², I2² = A² + B²,
L = RC - k (QA + PB) with k = (ε2+ε̃2)/(ε3+ε̃3), and
Λ = R^{ε̃2/(ε2+ε̃2)} C^{-ε2/(ε2+ε̃2)}.

In the angles P = I1 cos φ, Q = I1 sin φ, A = I2 cos ψ, B = I2 sin ψ, with
ϑ = φ + ψ and χ = ε3 ψ - ε̃3 φ, the reduced system is

    ϑ' = 2(ε3+ε̃3) RC                     R' = 2ε2 I1 I2 cos ϑ R
    χ' = -4ε1(ε3+ε̃3) I1 I2 sin ϑ         C' = 2ε̃2 I1 I2 cos ϑ C

and ξ = (ε2+ε̃2) χ + 2ε1(ε3+ε̃3) ϑ grows linearly with slope 4ε1(ε3+ε̃3)² L.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from algebra.errors import AngleUnwindingError, ContractViolation, ReductionUnavailable
from algebra.oscillator import EpsilonParams
from dynamics.integrators import RK4, integrate

STATE_FIELDS = ("P", "Q", "R", "A", "B", "C")
INVARIANT_NAMES = ("I1sq", "I2sq", "L", "Lambda")
CSV_COLUMNS = ("t",) + STATE_FIELDS + INVARIANT_NAMES + ("theta", "chi", "xi")


@dataclass(frozen=True)
class ClassicalState:
    P: float
    Q: float
    R: float
    A: float
    B: float
    C: float

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "ClassicalState":
        if len(values) != 6:
            raise ContractViolation(f"a classical state has 6 components, got {len(values)}")
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([self.P, self.Q, self.R, self.A, self.B, self.C], dtype=float)


@dataclass(frozen=True)
class ReducedState:
    theta: float
    chi: float
    R: float
    C: float
    I1: float
    I2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.theta, self.chi, self.R, self.C], dtype=float)


@dataclass(frozen=True)
class InvariantSet:
    """Λ is None when R <= 0 or C <= 0, L is None when ε3 + ε̃3 = 0"""
    I1sq: float
    I2sq: float
    L: Optional[float]
    Lambda: Optional[float]

    @property
    def lambda_available(self) -> bool:
        return self.Lambda is not None


@dataclass
class Trajectory:
    """
    Samples of a full integration with the invariants and angles of each
    sample. Unavailable values are stored as NaN; `angle_error` is set when the
    angles could not be unwound continuously.
    """
    times: np.ndarray
    states: np.ndarray
    invariants: Dict[str, np.ndarray]
    angles: Dict[str, np.ndarray]
    params: EpsilonParams
    method: str
    dt: float
    angle_error: Optional[str] = None

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ContractViolation("trajectory times must be strictly increasing")

    def state(self, i: int) -> ClassicalState:
        return ClassicalState.from_sequence(self.states[i])

    def invariant_set(self, i: int) -> InvariantSet:
        values = {name: float(self.invariants[name][i]) for name in INVARIANT_NAMES}
        return InvariantSet(I1sq=values["I1sq"], I2sq=values["I2sq"],
                            L=None if math.isnan(values["L"]) else values["L"],
                            Lambda=None if math.isnan(values["Lambda"]) else values["Lambda"])

    def rows(self) -> List[List[float]]:
        """One row per sample in CSV_COLUMNS order"""
        columns = [self.times] + [self.states[:, k] for k in range(6)]
        columns += [self.invariants[name] for name in INVARIANT_NAMES]
        columns += [self.angles[name] for name in ("theta", "chi", "xi")]
        return np.column_stack(columns).tolist()


@dataclass
class ReducedTrajectory:
    times: np.ndarray
    reduced: np.ndarray
    reconstructed: np.ndarray
    full: Trajectory
    max_deviation: float
    rc_identity_residual: float
    params: EpsilonParams
    initial: ReducedState

    @property
    def angles(self) -> Dict[str, np.ndarray]:
        theta, chi = self.reduced[:, 0], self.reduced[:, 1]
        return {"theta": theta, "chi": chi, "xi": _xi(theta, chi, _floats(self.params))}


@dataclass
class XiFit:
    slope: float
    intercept: float
    predicted_slope: float
    max_residual: float
    relative_error: float


@dataclass
class OrderStudy:
    dt: float
    drift_coarse: float
    drift_fine: float
    ratio: float
    per_invariant: Dict[str, List[float]] = field(default_factory=dict)


def _floats(params: EpsilonParams):
    return params.as_floats().values()


def _rhs_vector(y: np.ndarray, eps) -> np.ndarray:
    e1, e2, e3, t1, t2, t3 = eps
    P, Q, R, A, B, C = y
    return np.array([
        -4 * e1 * (Q * Q * A + P * Q * B) - 2 * e3 * R * Q * C,
        4 * e1 * (P * Q * A + P * P * B) + 2 * e3 * R * P * C,
        2 * e2 * (P * R * A - Q * R * B),
        -4 * t1 * (B * B * P + A * B * Q) - 2 * t3 * C * B * R,
        4 * t1 * (A * B * P + A * A * Q) + 2 * t3 * C * A * R,
        2 * t2 * (A * C * P - B * C * Q),
    ])


def rhs_full(s: ClassicalState, params: EpsilonParams) -> ClassicalState:
    return ClassicalState.from_sequence(_rhs_vector(s.as_array(), _floats(params)))


def _invariant_arrays(states: np.ndarray, eps) -> Dict[str, np.ndarray]:
    e1, e2, e3, t1, t2, t3 = eps
    states = np.atleast_2d(states)
    P, Q, R, A, B, C = (states[:, k] for k in range(6))
    out = {"I1sq": P * P + Q * Q, "I2sq": A * A + B * B}
    if e3 + t3 == 0:
        out["L"] = np.full(len(states), np.nan)
    else:
        out["L"] = R * C - (e2 + t2) / (e3 + t3) * (Q * A + P * B)
    lam = np.full(len(states), np.nan)
    positive = (R > 0) & (C > 0)
    if e2 + t2 != 0 and np.any(positive):
        log_lam = (t2 * np.log(R[positive]) - e2 * np.log(C[positive])) / (e2 + t2)
        lam[positive] = np.exp(log_lam)
    out["Lambda"] = lam
    return out


def invariants(s: ClassicalState, params: EpsilonParams) -> InvariantSet:
    values = {k: float(v[0]) for k, v in _invariant_arrays(s.as_array(), _floats(params)).items()}
    return InvariantSet(I1sq=values["I1sq"], I2sq=values["I2sq"],
                        L=None if math.isnan(values["L"]) else values["L"],
                        Lambda=None if math.isnan(values["Lambda"]) else values["Lambda"])


def unwind(raw: np.ndarray) -> np.ndarray:
    """
    Continuous branch of a sampled angle

    Raises:
        AngleUnwindingError: when two consecutive samples differ by π/2 or
            more after nearest-branch continuation
    """
    unwound = np.unwrap(raw)
    jumps = np.abs(np.diff(unwound))
    if jumps.size and np.max(jumps) >= np.pi / 2:
        k = int(np.argmax(jumps))
        raise AngleUnwindingError(f"angle jumps by {jumps[k]:.3f} rad between samples {k} and {k + 1}")
    return unwound


def _xi(theta: np.ndarray, chi: np.ndarray, eps) -> np.ndarray:
    e1, e2, e3, t1, t2, t3 = eps
    return (e2 + t2) * chi + 2 * e1 * (e3 + t3) * theta


def _angles(states: np.ndarray, eps) -> Dict[str, np.ndarray]:
    e1, e2, e3, t1, t2, t3 = eps
    phi = unwind(np.arctan2(states[:, 1], states[:, 0]))
    psi = unwind(np.arctan2(states[:, 4], states[:, 3]))
    theta = phi + psi
    chi = e3 * psi - t3 * phi
    return {"phi": phi, "psi": psi, "theta": theta, "chi": chi, "xi": _xi(theta, chi, eps)}


def integrate_full(s0: ClassicalState, params: EpsilonParams, t_end: float, dt: float, method: str = RK4,
                   sample_every: int = 1, rtol: float = 1e-8, atol: float = 1e-10) -> Trajectory:
    """
    Raises:
        IntegrationError: when the state stops being finite
    """
    eps = _floats(params)
    times, states = integrate(lambda y: _rhs_vector(y, eps), s0.as_array(), t_end, dt, method,
                              sample_every, rtol, atol)
    angle_error = None
    try:
        angles = _angles(states, eps)
    except AngleUnwindingError as exc:
        angle_error = str(exc)
        angles = {name: np.full(len(times), np.nan) for name in ("phi", "psi", "theta", "chi", "xi")}
    return Trajectory(times=times, states=states, invariants=_invariant_arrays(states, eps), angles=angles,
                      params=params, method=method, dt=dt, angle_error=angle_error)


def reduce_state(s: ClassicalState, params: EpsilonParams) -> ReducedState:
    """
    Raises:
        ReductionUnavailable: when an amplitude vanishes or ε3 + ε̃3 = 0
    """
    e1, e2, e3, t1, t2, t3 = _floats(params)
    i1, i2 = math.hypot(s.P, s.Q), math.hypot(s.A, s.B)
    if i1 == 0 or i2 == 0:
        raise ReductionUnavailable(f"vanishing amplitude (I1={i1}, I2={i2})")
    if e3 + t3 == 0:
        raise ReductionUnavailable("eps3 + teps3 = 0")
    phi, psi = math.atan2(s.Q, s.P), math.atan2(s.B, s.A)
    return ReducedState(theta=phi + psi, chi=e3 * psi - t3 * phi, R=s.R, C=s.C, I1=i1, I2=i2)


def reconstruct(theta: np.ndarray, chi: np.ndarray, R: np.ndarray, C: np.ndarray, i1: float, i2: float,
                params: EpsilonParams) -> np.ndarray:
    """Full states (n, 6) from reduced samples"""
    e1, e2, e3, t1, t2, t3 = _floats(params)
    phi = (e3 * theta - chi) / (e3 + t3)
    psi = (chi + t3 * theta) / (e3 + t3)
    return np.column_stack([i1 * np.cos(phi), i1 * np.sin(phi), R, i2 * np.cos(psi), i2 * np.sin(psi), C])


def _reduced_rhs(y: np.ndarray, eps, i1: float, i2: float) -> np.ndarray:
    e1, e2, e3, t1, t2, t3 = eps
    theta, chi, R, C = y
    amp = i1 * i2
    return np.array([
        2 * (e3 + t3) * R * C,
        -4 * e1 * (e3 + t3) * amp * np.sin(theta),
        2 * e2 * amp * np.cos(theta) * R,
        2 * t2 * amp * np.cos(theta) * C,
    ])


def reduce_and_integrate(s0: ClassicalState, params: EpsilonParams, t_end: float, dt: float,
                         method: str = RK4, sample_every: int = 1) -> ReducedTrajectory:
    """
    Integrate the reduced (ϑ, χ, R, C) system, reconstruct full states and
    compare them with integrate_full on the same grid

    Raises:
        ReductionUnavailable: when the reduction is undefined at s0
    """
    eps = _floats(params)
    r0 = reduce_state(s0, params)
    times, reduced = integrate(lambda y: _reduced_rhs(y, eps, r0.I1, r0.I2), r0.as_array(), t_end, dt, method,
                               sample_every)
    rebuilt = reconstruct(reduced[:, 0], reduced[:, 1], reduced[:, 2], reduced[:, 3], r0.I1, r0.I2, params)
    full = integrate_full(s0, params, t_end, dt, method, sample_every)
    e1, e2, e3, t1, t2, t3 = eps
    l0 = float(_invariant_arrays(s0.as_array(), eps)["L"][0])
    rc_law = l0 + (e2 + t2) / (e3 + t3) * r0.I1 * r0.I2 * np.sin(reduced[:, 0])
    return ReducedTrajectory(
        times=times,
        reduced=reduced,
        reconstructed=rebuilt,
        full=full,
        max_deviation=float(np.max(np.abs(rebuilt - full.states))),
        rc_identity_residual=float(np.max(np.abs(reduced[:, 2] * reduced[:, 3] - rc_law))),
        params=params,
        initial=r0,
    )


def predicted_xi_slope(params: EpsilonParams, L: float) -> float:
    e1, e2, e3, t1, t2, t3 = _floats(params)
    return 4 * e1 * (e3 + t3) ** 2 * L


def xi_check(traj, params: EpsilonParams) -> XiFit:
    """
    Least-squares line through ξ(t) compared with the predicted slope

    Accepts a Trajectory or a ReducedTrajectory.

    Raises:
        AngleUnwindingError: when the trajectory's angles could not be unwound
    """
    if getattr(traj, "angle_error", None):
        raise AngleUnwindingError(traj.angle_error)
    xi = traj.angles["xi"]
    t = traj.times
    slope, intercept = np.polyfit(t, xi, 1)
    residual = float(np.max(np.abs(xi - (slope * t + intercept))))
    states = traj.states if isinstance(traj, Trajectory) else traj.full.states
    L = float(_invariant_arrays(states[0], _floats(params))["L"][0])
    predicted = predicted_xi_slope(params, L)
    scale = max(abs(predicted), 1.0)
    return XiFit(slope=float(slope), intercept=float(intercept), predicted_slope=predicted,
                 max_residual=residual, relative_error=abs(slope - predicted) / scale)


def drift_report(traj: Trajectory) -> Dict[str, float]:
    """max_t |I(t) - I(0)| / max(|I(0)|, 1) for every invariant available at t = 0"""
    out = {}
    for name in INVARIANT_NAMES:
        series = traj.invariants[name]
        if math.isnan(series[0]):
            continue
        out[name] = float(np.nanmax(np.abs(series - series[0])) / max(abs(series[0]), 1.0))
    return out


def signs_preserved(traj: Trajectory) -> bool:
    """R and C keep the sign they start with"""
    for k in (2, 5):
        start = np.sign(traj.states[0, k])
        if np.any(np.sign(traj.states[:, k]) != start):
            return False
    return True


def order_study(s0: ClassicalState, params: EpsilonParams, t_end: float, dt: float) -> OrderStudy:
    """Worst invariant drift under RK4 at dt and dt/2; fourth order gives a ratio near 16"""
    coarse = drift_report(integrate_full(s0, params, t_end, dt, RK4))
    fine = drift_report(integrate_full(s0, params, t_end, dt / 2, RK4))
    worst_coarse = max(coarse.values(), default=0.0)
    worst_fine = max(fine.values(), default=0.0)
    ratio = worst_coarse / worst_fine if worst_fine > 0 else math.inf
    return OrderStudy(dt=dt, drift_coarse=worst_coarse, drift_fine=worst_fine, ratio=ratio,
                      per_invariant={name: [coarse[name], fine[name]] for name in coarse})
