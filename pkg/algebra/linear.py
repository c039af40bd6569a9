"""
Row reduction over either scalar backend.

Exact matrices are reduced with Fraction arithmetic and pivot on the first
nonzero entry. Float matrices use partial pivoting and treat entries below
tol * scale as zero.
"""
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from algebra.errors import ContractViolation, SingularMatrixError
from algebra.scalars import DEFAULT_TOL, identity, is_exact, max_abs, zeros


def _scale_of(matrix: np.ndarray) -> float:
    return max(1.0, float(max_abs(matrix))) if matrix.size else 1.0


def rref(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form

    Returns:
        (reduced matrix, list of pivot columns)
    """
    exact = is_exact(matrix)
    work = matrix.copy() if exact else np.array(matrix, dtype=float)
    rows, cols = work.shape
    cutoff = tol * _scale_of(work)
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        if exact:
            candidates = [r for r in range(row, rows) if work[r, col] != 0]
            if not candidates:
                continue
            pivot_row = candidates[0]
        else:
            pivot_row = row + int(np.argmax(np.abs(work[row:, col])))
            if abs(work[pivot_row, col]) <= cutoff:
                work[row:, col] = 0.0
                continue
        if pivot_row != row:
            work[[row, pivot_row]] = work[[pivot_row, row]]
        pivot = work[row, col]
        work[row] = work[row] * (Fraction(1) / pivot) if exact else work[row] / pivot
        for r in range(rows):
            if r == row:
                continue
            factor = work[r, col]
            if exact and factor == 0:
                continue
            work[r] = work[r] - factor * work[row]
        pivots.append(col)
        row += 1
    return work, pivots


def rank(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    if matrix.size == 0:
        return 0
    return len(rref(matrix, tol)[1])


def nullspace(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Basis of {x : matrix @ x = 0}, one basis vector per row

    The basis is the standard one read off the reduced echelon form (one
    vector per free column), so exact inputs give exact, reproducible bases.
    """
    exact = is_exact(matrix)
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return identity(cols, exact)
    reduced, pivots = rref(matrix, tol)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros((len(free), cols), exact)
    one = Fraction(1) if exact else 1.0
    for k, f in enumerate(free):
        basis[k, f] = one
        for i, p in enumerate(pivots):
            basis[k, p] = -reduced[i, f]
    return basis


def solve(matrix: np.ndarray, rhs: np.ndarray, tol: float = DEFAULT_TOL) -> Optional[np.ndarray]:
    """
    One solution of matrix @ x = rhs, or None when the system is inconsistent
    """
    if matrix.shape[0] != rhs.shape[0]:
        raise ContractViolation(f"solve: {matrix.shape} matrix against {rhs.shape} right-hand side")
    exact = is_exact(matrix)
    cols = matrix.shape[1]
    augmented = np.concatenate([matrix, rhs.reshape(-1, 1)], axis=1)
    reduced, pivots = rref(augmented, tol)
    if cols in pivots:
        return None
    x = zeros(cols, exact)
    for i, p in enumerate(pivots):
        x[p] = reduced[i, cols]
    return x


def inverse(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ContractViolation(f"inverse of non-square {matrix.shape} matrix")
    exact = is_exact(matrix)
    augmented = np.concatenate([matrix, identity(n, exact)], axis=1)
    reduced, pivots = rref(augmented, tol)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError(f"{n}x{n} matrix is singular")
    return reduced[:, n:]


class EchelonBasis:
    """
    Incrementally grown basis of a subspace of a coordinate space.

    Accepted vectors are kept in insertion order; `coordinates` expresses any
    vector of the span in terms of them.
    """

    def __init__(self, dim: int, exact: bool = True, tol: float = DEFAULT_TOL):
        self.dim = dim
        self.exact = exact
        self.tol = tol
        self.vectors: List[np.ndarray] = []
        self._rows: List[np.ndarray] = []
        self._pivots: List[int] = []
        self._combos: List[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.vectors)

    def _reduce(self, vec: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if vec.shape != (self.dim,):
            raise ContractViolation(f"expected a vector of length {self.dim}, got shape {vec.shape}")
        residual = vec.copy() if self.exact else np.array(vec, dtype=float)
        coeffs = zeros(len(self._rows), self.exact)
        for i, (row, pivot) in enumerate(zip(self._rows, self._pivots)):
            c = residual[pivot]
            if self.exact and c == 0:
                continue
            residual = residual - c * row
            coeffs[i] = c
        return residual, coeffs

    def _is_zero(self, residual: np.ndarray, original: np.ndarray) -> bool:
        if self.exact:
            return all(x == 0 for x in residual)
        return float(max_abs(residual)) <= self.tol * max(1.0, float(max_abs(original)))

    def _combine(self, coeffs: np.ndarray) -> np.ndarray:
        out = zeros(len(self.vectors), self.exact)
        for c, combo in zip(coeffs, self._combos):
            if self.exact and c == 0:
                continue
            out[:len(combo)] = out[:len(combo)] + c * combo
        return out

    def add(self, vec: np.ndarray) -> bool:
        """Append vec if it is independent of the current basis"""
        residual, coeffs = self._reduce(vec)
        if self._is_zero(residual, vec):
            return False
        if self.exact:
            pivot = next(i for i, x in enumerate(residual) if x != 0)
        else:
            pivot = int(np.argmax(np.abs(residual)))
        scale = residual[pivot]
        combo = -self._combine(coeffs)
        combo = np.concatenate([combo, zeros(1, self.exact)])
        combo[-1] = combo[-1] + 1
        if self.exact:
            inv = Fraction(1) / scale
            self._rows.append(residual * inv)
            self._combos.append(combo * inv)
        else:
            self._rows.append(residual / scale)
            self._combos.append(combo / scale)
        self._pivots.append(pivot)
        self.vectors.append(vec.copy())
        return True

    def coordinates(self, vec: np.ndarray) -> Optional[np.ndarray]:
        """Coefficients of vec over the accepted vectors, None outside the span"""
        residual, coeffs = self._reduce(vec)
        if not self._is_zero(residual, vec):
            return None
        return self._combine(coeffs)

    def contains(self, vec: np.ndarray) -> bool:
        return self.coordinates(vec) is not None
