"""
Numerical search for split representations of an isotopic pair.

The unknowns are the blocks U_X : W1 -> W2 (X in V1) and W_A : W2 -> W1
(A in V2). Residuals are the relations

    sum_k [X,Y]_A^k U_k - U_X W_A U_Y + U_Y W_A U_X      (X < Y)
    sum_k [A,B]_X^k W_k - W_A U_X W_B + W_B U_X W_A      (A < B)

plus the normalization sum_X |U_X|^2 - 1, which removes the scaling gauge
(U, W) -> (sU, W/s) and the trivial solution. Each seed runs a damped
Gauss-Newton (Levenberg-Marquardt) iteration.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from algebra.errors import ContractViolation
from algebra.isotopic_pair import IsotopicPair
from algebra.representations import PairRepresentation, verify_representation
from algebra.scalars import to_float

LAMBDA_START = 1e-3
LAMBDA_MAX = 1e12


@dataclass(frozen=True)
class SearchSettings:
    seeds: int = 64
    max_iters: int = 500
    tol: float = 1e-10
    base_seed: int = 0
    workers: int = 1


@dataclass
class Attempt:
    seed: int
    residual: float
    iterations: int


@dataclass
class SearchResult:
    """
    Best candidate over all seeds. `residual` is the maximum of the relation
    residual recomputed by verify_representation and the normalization
    residual; `success` means it is below the requested tolerance.
    """
    representation: PairRepresentation
    residual: float
    relation_residual: float
    normalization_residual: float
    iterations: int
    seed: int
    success: bool
    attempts: List[Attempt] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "residual": self.residual,
            "relation_residual": self.relation_residual,
            "normalization_residual": self.normalization_residual,
            "iterations": self.iterations,
            "seed": self.seed,
            "attempts": [[a.seed, a.residual, a.iterations] for a in self.attempts],
        }


def float_pair(pair: IsotopicPair) -> IsotopicPair:
    if not pair.exact:
        return pair
    return IsotopicPair(n1=pair.n1, n2=pair.n2, m1=to_float(pair.m1), m2=to_float(pair.m2),
                        labels1=pair.labels1, labels2=pair.labels2)


class _Problem:
    """Residual vector and Jacobian of the block equations for one pair"""

    def __init__(self, pair: IsotopicPair, d1: int, d2: int):
        self.m1 = to_float(pair.m1)
        self.m2 = to_float(pair.m2)
        self.n1, self.n2 = pair.n1, pair.n2
        self.d1, self.d2 = d1, d2
        self.block = d1 * d2
        self.size = (self.n1 + self.n2) * self.block
        self.pairs1 = [(x, y) for x in range(self.n1) for y in range(x + 1, self.n1)]
        self.pairs2 = [(a, b) for a in range(self.n2) for b in range(a + 1, self.n2)]

    def unpack(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        split = self.n1 * self.block
        u = x[:split].reshape(self.n1, self.d2, self.d1)
        w = x[split:].reshape(self.n2, self.d1, self.d2)
        return u, w

    def _u_slice(self, k: int) -> slice:
        return slice(k * self.block, (k + 1) * self.block)

    def _w_slice(self, k: int) -> slice:
        offset = self.n1 * self.block
        return slice(offset + k * self.block, offset + (k + 1) * self.block)

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        u, w = self.unpack(x)
        d1, d2, blk = self.d1, self.d2, self.block
        eye1, eye2, eye_blk = np.eye(d1), np.eye(d2), np.eye(blk)
        rows = (len(self.pairs1) * self.n2 + len(self.pairs2) * self.n1) * blk + 1
        r = np.zeros(rows)
        jac = np.zeros((rows, self.size))
        at = 0
        for xi, yi in self.pairs1:
            for a in range(self.n2):
                rows_here = slice(at, at + blk)
                linear = np.einsum("k,kij->ij", self.m1[a, xi, yi], u)
                r[rows_here] = (linear - u[xi] @ w[a] @ u[yi] + u[yi] @ w[a] @ u[xi]).reshape(-1)
                for k in np.nonzero(self.m1[a, xi, yi])[0]:
                    jac[rows_here, self._u_slice(k)] += self.m1[a, xi, yi, k] * eye_blk
                # d(U_X W U_Y) with respect to U_X, W and U_Y
                jac[rows_here, self._u_slice(xi)] -= np.kron(eye2, (w[a] @ u[yi]).T)
                jac[rows_here, self._w_slice(a)] -= np.kron(u[xi], u[yi].T)
                jac[rows_here, self._u_slice(yi)] -= np.kron(u[xi] @ w[a], eye1)
                jac[rows_here, self._u_slice(yi)] += np.kron(eye2, (w[a] @ u[xi]).T)
                jac[rows_here, self._w_slice(a)] += np.kron(u[yi], u[xi].T)
                jac[rows_here, self._u_slice(xi)] += np.kron(u[yi] @ w[a], eye1)
                at += blk
        for ai, bi in self.pairs2:
            for xk in range(self.n1):
                rows_here = slice(at, at + blk)
                linear = np.einsum("k,kij->ij", self.m2[xk, ai, bi], w)
                r[rows_here] = (linear - w[ai] @ u[xk] @ w[bi] + w[bi] @ u[xk] @ w[ai]).reshape(-1)
                for k in np.nonzero(self.m2[xk, ai, bi])[0]:
                    jac[rows_here, self._w_slice(k)] += self.m2[xk, ai, bi, k] * eye_blk
                jac[rows_here, self._w_slice(ai)] -= np.kron(eye1, (u[xk] @ w[bi]).T)
                jac[rows_here, self._u_slice(xk)] -= np.kron(w[ai], w[bi].T)
                jac[rows_here, self._w_slice(bi)] -= np.kron(w[ai] @ u[xk], eye2)
                jac[rows_here, self._w_slice(bi)] += np.kron(eye1, (u[xk] @ w[ai]).T)
                jac[rows_here, self._u_slice(xk)] += np.kron(w[bi], w[ai].T)
                jac[rows_here, self._w_slice(ai)] += np.kron(w[bi] @ u[xk], eye2)
                at += blk
        split = self.n1 * blk
        r[at] = float(x[:split] @ x[:split]) - 1.0
        jac[at, :split] = 2 * x[:split]
        return r, jac

    def representation(self, x: np.ndarray) -> PairRepresentation:
        u, w = self.unpack(x)
        d1, d = self.d1, self.d1 + self.d2
        t1 = np.zeros((self.n1, d, d))
        t2 = np.zeros((self.n2, d, d))
        t1[:, d1:, :d1] = u
        t2[:, :d1, d1:] = w
        return PairRepresentation(dim=d, t1=t1, t2=t2, grading=(d1, self.d2))


def levenberg_marquardt(problem: _Problem, x0: np.ndarray, max_iters: int, tol: float) -> Tuple[np.ndarray, int]:
    """
    Minimize |r(x)|^2 by solving [J; sqrt(λ) I] δ = [-r; 0] in the least
    squares sense; λ shrinks after an accepted step and grows after a
    rejected one.

    Returns:
        (final unknowns, iterations used)
    """
    x = x0
    r, jac = problem.evaluate(x)
    cost = float(r @ r)
    lam = LAMBDA_START
    damping = np.eye(problem.size)
    iterations = 0
    for iterations in range(1, max_iters + 1):
        if np.max(np.abs(r)) < tol:
            break
        lhs = np.vstack([jac, np.sqrt(lam) * damping])
        rhs = np.concatenate([-r, np.zeros(problem.size)])
        delta = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
        candidate = x + delta
        r_new, jac_new = problem.evaluate(candidate)
        cost_new = float(r_new @ r_new)
        if cost_new < cost:
            x, r, jac, cost = candidate, r_new, jac_new, cost_new
            lam = max(lam / 3, 1e-15)
        else:
            lam *= 4
            if lam > LAMBDA_MAX:
                break
    return x, iterations


def _initial_point(problem: _Problem, seed: int) -> np.ndarray:
    x = np.random.default_rng(seed).standard_normal(problem.size)
    split = problem.n1 * problem.block
    norm = np.linalg.norm(x[:split])
    if norm > 0:
        x[:split] /= norm
    return x


def _run_seed(problem: _Problem, pair: IsotopicPair, seed: int, settings: SearchSettings):
    x, iterations = levenberg_marquardt(problem, _initial_point(problem, seed), settings.max_iters, settings.tol)
    rep = problem.representation(x)
    report = verify_representation(rep, pair, settings.tol)
    relation = float(report.residual)
    split = problem.n1 * problem.block
    normalization = abs(float(x[:split] @ x[:split]) - 1.0)
    return seed, rep, relation, normalization, iterations


def find_representation(pair: IsotopicPair, d1: int, d2: int,
                        settings: SearchSettings = SearchSettings()) -> SearchResult:
    """
    Best split representation with dim W1 = d1, dim W2 = d2 over
    `settings.seeds` random starts (seed base_seed + i). A failed search is a
    result with success = False, not an exception.
    """
    if d1 < 1 or d2 < 1:
        raise ContractViolation(f"d1 and d2 must be positive, got ({d1}, {d2})")
    if settings.seeds < 1:
        raise ContractViolation("at least one seed is required")
    fpair = float_pair(pair)
    problem = _Problem(fpair, d1, d2)
    seeds = [settings.base_seed + i for i in range(settings.seeds)]
    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            outcomes = list(pool.map(lambda s: _run_seed(problem, fpair, s, settings), seeds))
    else:
        outcomes = [_run_seed(problem, fpair, s, settings) for s in seeds]
    attempts = [Attempt(seed=s, residual=max(rel, norm), iterations=it) for s, _, rel, norm, it in outcomes]
    best = min(range(len(outcomes)), key=lambda i: attempts[i].residual)
    seed, rep, relation, normalization, iterations = outcomes[best]
    residual = max(relation, normalization)
    return SearchResult(representation=rep, residual=residual, relation_residual=relation,
                        normalization_residual=normalization, iterations=iterations, seed=seed,
                        success=residual < settings.tol, attempts=attempts)
