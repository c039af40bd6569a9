"""
Representations of isotopic pairs.

A representation assigns matrices T1(X), X in V1, and T2(A), A in V2, acting
on one space W, subject to

    T1([X, Y]_A) = T1(X) T2(A) T1(Y) - T1(Y) T2(A) T1(X)
    T2([A, B]_X) = T2(A) T1(X) T2(B) - T2(B) T1(X) T2(A)

A split representation has W = W1 ⊕ W2 (W1 on the first d1 coordinates),
T1(V1) : W1 -> W2 and T2(V2) : W2 -> W1.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from algebra.codecs import matrices_from_json, matrix_to_json, read_json, require, write_json
from algebra.errors import ConfigError, ContractViolation
from algebra.isotopic_pair import IsotopicPair
from algebra.oscillator import EpsilonParams
from algebra.reports import AxiomReport
from algebra.scalars import DEFAULT_TOL, is_exact, zeros


@dataclass(frozen=True, eq=False)
class PairRepresentation:
    dim: int
    t1: np.ndarray
    t2: np.ndarray
    grading: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        for name, stack in (("t1", self.t1), ("t2", self.t2)):
            if stack.ndim != 3 or stack.shape[1:] != (self.dim, self.dim):
                raise ContractViolation(f"{name} has shape {stack.shape}, expected (k, {self.dim}, {self.dim})")
        if self.grading is not None and sum(self.grading) != self.dim:
            raise ContractViolation(f"grading {self.grading} does not add up to {self.dim}")

    @property
    def exact(self) -> bool:
        return is_exact(self.t1)


def _check_sizes(rep: PairRepresentation, pair: IsotopicPair) -> None:
    if rep.t1.shape[0] != pair.n1 or rep.t2.shape[0] != pair.n2:
        raise ContractViolation(
            f"representation has {rep.t1.shape[0]}|{rep.t2.shape[0]} generators, pair has {pair.n1}|{pair.n2}")


def relation_residuals(rep: PairRepresentation, pair: IsotopicPair) -> Tuple[np.ndarray, np.ndarray]:
    """
    Residuals of both relation families

    Returns:
        (V1 residual indexed (X, Y, A, i, j), V2 residual indexed (A, B, X, i, j))
    """
    _check_sizes(rep, pair)
    t1, t2 = rep.t1, rep.t2
    image1 = np.einsum("axyk,kij->xyaij", pair.m1, t1)
    cubic1 = np.einsum("xij,ajk,ykl->xyail", t1, t2, t1)
    rel1 = image1 - (cubic1 - np.einsum("yxaij->xyaij", cubic1))
    image2 = np.einsum("xabk,kij->abxij", pair.m2, t2)
    cubic2 = np.einsum("aij,xjk,bkl->abxil", t2, t1, t2)
    rel2 = image2 - (cubic2 - np.einsum("baxij->abxij", cubic2))
    return rel1, rel2


def _block_leak(stack: np.ndarray, rows: slice, cols: slice) -> np.ndarray:
    """Entries of each matrix outside the block [rows, cols]"""
    mask = np.ones(stack.shape[1:], dtype=bool)
    mask[rows, cols] = False
    return np.where(mask[None, :, :], stack, 0)


def verify_representation(rep: PairRepresentation, pair: IsotopicPair, tol: float = DEFAULT_TOL) -> AxiomReport:
    """
    Relations (required), nilpotency and split block shape (informational).
    Flags: valid, nilpotent, split.
    """
    report = AxiomReport(subject="pair representation", exact=rep.exact, tol=tol)
    l1, l2 = pair.labels1, pair.labels2
    rel1, rel2 = relation_residuals(rep, pair)
    report.add("relations_V1", rel1, [("X", l1), ("Y", l1), ("A", l2)], component_axes=2)
    report.add("relations_V2", rel2, [("A", l2), ("B", l2), ("X", l1)], component_axes=2)
    valid = report.passed
    nil1 = report.add("nilpotent_V1", np.einsum("xij,yjk->xyik", rep.t1, rep.t1),
                      [("X", l1), ("Y", l1)], required=False, component_axes=2)
    nil2 = report.add("nilpotent_V2", np.einsum("xij,yjk->xyik", rep.t2, rep.t2),
                      [("A", l2), ("B", l2)], required=False, component_axes=2)
    split = False
    if rep.grading is not None:
        d1 = rep.grading[0]
        w1, w2 = slice(0, d1), slice(d1, rep.dim)
        s1 = report.add("split_shape_V1", _block_leak(rep.t1, w2, w1), [("X", l1)], required=False, component_axes=2)
        s2 = report.add("split_shape_V2", _block_leak(rep.t2, w1, w2), [("A", l2)], required=False, component_axes=2)
        split = s1.passed and s2.passed
    report.flags.update({"valid": valid, "nilpotent": nil1.passed and nil2.passed, "split": split})
    return report


def split_double(rep: PairRepresentation) -> PairRepresentation:
    """(T1, T2) on W  ->  the split representation on W ⊕ W"""
    d = rep.dim
    t1 = zeros((rep.t1.shape[0], 2 * d, 2 * d), rep.exact)
    t2 = zeros((rep.t2.shape[0], 2 * d, 2 * d), rep.exact)
    t1[:, d:, :d] = rep.t1
    t2[:, :d, d:] = rep.t2
    return PairRepresentation(dim=2 * d, t1=t1, t2=t2, grading=(d, d))


def zero_representation(pair: IsotopicPair, d1: int, d2: int, exact: bool = True) -> PairRepresentation:
    d = d1 + d2
    return PairRepresentation(dim=d, t1=zeros((pair.n1, d, d), exact), t2=zeros((pair.n2, d, d), exact),
                              grading=(d1, d2))


def tautological_representation(pair: IsotopicPair, grading: Optional[Tuple[int, int]] = None) -> PairRepresentation:
    """Each element acts by its own matrix in the pair's associative realization"""
    if pair.realization is None:
        raise ContractViolation("the pair has no associative realization")
    r1, r2 = pair.realization
    return PairRepresentation(dim=r1.shape[1], t1=r1.copy(), t2=r2.copy(), grading=grading)


def zero_extend(rep: PairRepresentation, pair: IsotopicPair,
                keep1: Sequence[int], keep2: Sequence[int]) -> PairRepresentation:
    """Representation of `pair` acting by rep on the kept basis vectors and by 0 elsewhere"""
    if rep.t1.shape[0] != len(keep1) or rep.t2.shape[0] != len(keep2):
        raise ContractViolation("sub-representation size does not match the kept basis")
    t1 = zeros((pair.n1, rep.dim, rep.dim), rep.exact)
    t2 = zeros((pair.n2, rep.dim, rep.dim), rep.exact)
    for k, index in enumerate(keep1):
        t1[index] = rep.t1[k]
    for k, index in enumerate(keep2):
        t2[index] = rep.t2[k]
    return PairRepresentation(dim=rep.dim, t1=t1, t2=t2, grading=rep.grading)


def subpair_representation(params: EpsilonParams) -> PairRepresentation:
    """
    Rank-one split representation of the oscillator pair on W1 ⊕ W2 = C^2 ⊕ C:
    p, q act by the coordinate rows, a, b by the columns (2ε1, 0) and (0, -2ε1),
    r and c act by zero.
    """
    exact = params.exact
    one = 1 if exact else 1.0
    t1 = zeros((3, 3, 3), exact)
    t2 = zeros((3, 3, 3), exact)
    t1[0, 2, 0] = t1[0, 2, 0] + one
    t1[1, 2, 1] = t1[1, 2, 1] + one
    t2[0, 0, 2] = 2 * params.eps1
    t2[1, 1, 2] = -2 * params.eps1
    return PairRepresentation(dim=3, t1=t1, t2=t2, grading=(2, 1))


def representation_to_json(rep: PairRepresentation) -> Dict[str, Any]:
    return {
        "dimW": rep.dim,
        "grading": list(rep.grading) if rep.grading else None,
        "exact": rep.exact,
        "T1": [matrix_to_json(m) for m in rep.t1],
        "T2": [matrix_to_json(m) for m in rep.t2],
    }


def representation_from_json(data: Dict[str, Any], source: str = "representation") -> PairRepresentation:
    dim = int(require(data, "dimW", source))
    exact = bool(data.get("exact", True))
    grading = data.get("grading")
    if grading is not None:
        if len(grading) != 2:
            raise ConfigError(f"{source}: grading must be [d1, d2]")
        grading = (int(grading[0]), int(grading[1]))
    t1 = matrices_from_json(require(data, "T1", source), exact, source, dim)
    t2 = matrices_from_json(require(data, "T2", source), exact, source, dim)
    return PairRepresentation(dim=dim, t1=t1, t2=t2, grading=grading)


def load_representation(path: Path) -> PairRepresentation:
    return representation_from_json(read_json(path), source=str(path))


def dump_representation(rep: PairRepresentation, path: Path) -> None:
    write_json(path, representation_to_json(rep))
