"""
Scalar backends.

Exact arithmetic keeps fractions.Fraction entries in numpy object arrays; the
float backend uses plain float64 arrays. Every array-producing function in the
package preserves the backend of its inputs, so a computation started exactly
stays exact.
"""
from fractions import Fraction
from typing import Any, Iterable, Tuple, Union

import numpy as np

Scalar = Union[Fraction, float]

DEFAULT_TOL = 1e-10


def parse_scalar(value: Any) -> Fraction:
    """
    Convert a JSON/CLI value to an exact rational

    Accepts ints, Fractions, "p/q" strings and decimal strings or floats
    (floats go through their shortest repr, so 0.1 becomes 1/10).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise ValueError(f"Not a scalar: {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"Not a scalar: {value!r}")


_to_fraction = np.frompyfunc(parse_scalar, 1, 1)


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def as_array(values: Any, exact: bool = True) -> np.ndarray:
    """Build an array on the requested backend"""
    if exact:
        arr = np.array(values, dtype=object)
        if arr.ndim == 0:
            return np.array(parse_scalar(arr.item()), dtype=object)
        return np.asarray(_to_fraction(arr), dtype=object)
    arr = np.array(values, dtype=object) if _has_fraction(values) else np.array(values)
    return arr.astype(float)


def _has_fraction(values: Any) -> bool:
    if isinstance(values, np.ndarray):
        return values.dtype == object
    if isinstance(values, Fraction):
        return True
    if isinstance(values, (list, tuple)):
        return any(_has_fraction(v) for v in values)
    return False


def zeros(shape: Union[int, Tuple[int, ...]], exact: bool = True) -> np.ndarray:
    if exact:
        arr = np.empty(shape, dtype=object)
        arr.fill(Fraction(0))
        return arr
    return np.zeros(shape)


def identity(n: int, exact: bool = True) -> np.ndarray:
    eye = zeros((n, n), exact)
    for i in range(n):
        eye[i, i] = Fraction(1) if exact else 1.0
    return eye


def unit_vector(n: int, index: int, exact: bool = True) -> np.ndarray:
    vec = zeros(n, exact)
    vec[index] = Fraction(1) if exact else 1.0
    return vec


def constant(value: Any, like: np.ndarray) -> Scalar:
    """A scalar on the same backend as `like`"""
    if is_exact(like):
        return parse_scalar(value)
    return float(value)


def to_float(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr, dtype=object).astype(float) if is_exact(arr) else np.asarray(arr, dtype=float)


def to_exact(arr: np.ndarray) -> np.ndarray:
    return arr if is_exact(arr) else as_array(arr.tolist(), exact=True)


def match_backend(arr: np.ndarray, like: np.ndarray) -> np.ndarray:
    return to_exact(arr) if is_exact(like) else to_float(arr)


def max_abs(arr: np.ndarray) -> Scalar:
    """Largest absolute entry, 0 for an empty array"""
    if is_exact(arr):
        return max((abs(x) for x in arr.flat), default=Fraction(0))
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def within_tolerance(residual: Scalar, exact: bool, tol: float = DEFAULT_TOL) -> bool:
    """Exact residuals must vanish; float residuals may be up to tol"""
    if exact:
        return residual == 0
    return float(residual) <= tol


def worst_index(residual: np.ndarray, component_axes: int = 1) -> Tuple[Tuple[int, ...], Scalar]:
    """
    Locate the worst entry of a residual array

    Args:
        residual: array whose trailing `component_axes` axes hold the
            components of a single identity instance
        component_axes: number of trailing axes to fold into one norm

    Returns:
        (index of the worst instance, its max-abs residual)
    """
    lead_shape = residual.shape[:residual.ndim - component_axes]
    if residual.size == 0:
        return tuple(0 for _ in lead_shape), constant(0, residual)
    flat = residual.reshape(int(np.prod(lead_shape, dtype=int)), -1)
    best_row, best_val = 0, None
    for row in range(flat.shape[0]):
        val = max_abs(flat[row])
        if best_val is None or val > best_val:
            best_row, best_val = row, val
    return tuple(int(i) for i in np.unravel_index(best_row, lead_shape)), best_val


def scalar_to_json(value: Scalar) -> Union[str, int, float]:
    """Fractions are written as "p/q" strings (integers stay integers)"""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def array_to_json(arr: np.ndarray) -> Any:
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return scalar_to_json(arr.item())
    return [array_to_json(sub) for sub in arr]


def sequence_to_array(rows: Iterable[np.ndarray]) -> np.ndarray:
    rows = list(rows)
    if rows and is_exact(rows[0]):
        out = np.empty((len(rows),) + rows[0].shape, dtype=object)
        for i, row in enumerate(rows):
            out[i] = row
        return out
    return np.array(rows, dtype=float)
