from typing import Callable, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from algebra.errors import ContractViolation, IntegrationError

RK4 = "RK4"
RK45 = "RK45"
METHODS = (RK4, RK45)


def time_grid(t_end: float, dt: float) -> Tuple[int, float]:
    """
    Number of steps and the step actually used, so that the grid ends exactly
    at t_end with a step no larger than dt
    """
    if dt <= 0 or t_end <= 0:
        raise ContractViolation(f"dt and t_end must be positive, got dt={dt}, t_end={t_end}")
    n_steps = max(1, int(np.ceil(t_end / dt - 1e-9)))
    return n_steps, t_end / n_steps


def _check_finite(y: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(y)):
        raise IntegrationError(f"state is no longer finite at t={t:.6g}", t)


def rk4_integrate(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, t_end: float, dt: float,
                  sample_every: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Classic fixed-step RK4 for an autonomous system

    Args:
        rhs: derivative of the state (any array shape)
        y0: initial state
        t_end: final time
        dt: requested step (the grid step is t_end / ceil(t_end / dt))
        sample_every: keep every k-th step (the last step is always kept)

    Returns:
        (sample times, samples stacked along a new first axis)

    Raises:
        IntegrationError: on NaN or overflow
    """
    if sample_every < 1:
        raise ContractViolation(f"sample_every must be >= 1, got {sample_every}")
    n_steps, h = time_grid(t_end, dt)
    y = np.array(y0, dtype=float)
    times = [0.0]
    samples = [y.copy()]
    with np.errstate(over='ignore', invalid='ignore'):
        for step in range(1, n_steps + 1):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            _check_finite(y, step * h)
            if step % sample_every == 0 or step == n_steps:
                times.append(step * h)
                samples.append(y.copy())
    return np.array(times), np.array(samples)


def rk45_integrate(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, t_end: float, dt: float,
                   rtol: float = 1e-8, atol: float = 1e-10, sample_every: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """Adaptive RK45 (scipy) reported on the same grid rk4_integrate would use"""
    n_steps, h = time_grid(t_end, dt)
    steps = list(range(0, n_steps + 1, sample_every))
    if steps[-1] != n_steps:
        steps.append(n_steps)
    t_eval = np.array(steps, dtype=float) * h
    t_eval[-1] = t_end
    shape = np.shape(y0)
    sol = solve_ivp(lambda t, y: rhs(y.reshape(shape)).reshape(-1), (0.0, t_end),
                    np.asarray(y0, dtype=float).reshape(-1), method="RK45", t_eval=t_eval, rtol=rtol, atol=atol)
    if not sol.success:
        t_fail = float(sol.t[-1]) if sol.t.size else 0.0
        raise IntegrationError(f"RK45 failed at t={t_fail:.6g}: {sol.message}", t_fail)
    samples = sol.y.T.reshape((len(sol.t),) + shape)
    _check_finite(samples, float(sol.t[-1]))
    return sol.t, samples


def integrate(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, t_end: float, dt: float,
              method: str = RK4, sample_every: int = 1, rtol: float = 1e-8, atol: float = 1e-10):
    if method == RK4:
        return rk4_integrate(rhs, y0, t_end, dt, sample_every)
    if method == RK45:
        return rk45_integrate(rhs, y0, t_end, dt, rtol, atol, sample_every)
    raise ContractViolation(f"unknown method {method!r}, expected one of {', '.join(METHODS)}")
