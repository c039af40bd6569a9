"""
The Lie superalgebra g(V) = g0(V) ⊕ V of a polarized ALTS.

g0(V) is the span of the operators R_{y,z} : x -> [x y z] inside End(V); it
is even. V is odd. The brackets are

    [D, E] = DE - ED,   [D, v] = D v = -[v, D],   [v, w] = R_{v,w}.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.alts import AltsTensor
from algebra.errors import AxiomViolation, ContractViolation
from algebra.isotopic_pair import IsotopicPair, associative_pair
from algebra.linear import EchelonBasis
from algebra.reports import AxiomReport
from algebra.scalars import DEFAULT_TOL, is_exact, scalar_to_json, zeros


@dataclass(frozen=True, eq=False)
class LieAlgebraRealization:
    """A Lie algebra given by matrices together with its structure constants"""
    labels: Tuple[str, ...]
    matrices: np.ndarray
    structure: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class LieSuperalgebra:
    """
    Structure constants C[x, y, z] with [e_x, e_y] = sum_z C[x, y, z] e_z.

    parity[i] is 0 for even and 1 for odd basis elements; parts[i] is 1 or 2
    for odd elements of a polarized system (0 otherwise).
    """
    labels: Tuple[str, ...]
    parity: Tuple[int, ...]
    structure: np.ndarray
    parts: Tuple[int, ...] = ()
    even: Optional[LieAlgebraRealization] = None

    @property
    def exact(self) -> bool:
        return is_exact(self.structure)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def superdimension(self) -> Tuple[int, int]:
        odd = sum(self.parity)
        return self.dim - odd, odd

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis element; known: {', '.join(self.labels)}")

    def bracket(self, x: str, y: str) -> np.ndarray:
        return self.structure[self.index(x), self.index(y)]

    def element(self, coefficients: Dict[str, Any]) -> np.ndarray:
        """Coordinate vector from {label: coefficient}"""
        vec = zeros(self.dim, self.exact)
        for label, coeff in coefficients.items():
            vec[self.index(label)] = vec[self.index(label)] + coeff
        return vec


def r_operator_label(alts: AltsTensor, y: int, z: int) -> str:
    return f"R[{alts.labels[y]},{alts.labels[z]}]"


def build_g0(alts: AltsTensor, tol: float = DEFAULT_TOL) -> LieAlgebraRealization:
    """
    Basis of span{R_yz} chosen greedily in the order (y, z), y <= z, and its
    structure constants

    Raises:
        AxiomViolation: when a commutator of two basis operators leaves the span
    """
    n = alts.n
    exact = alts.exact
    span = EchelonBasis(n * n, exact=exact, tol=tol)
    labels: List[str] = []
    matrices = []
    for y in range(n):
        for z in range(y, n):
            operator = alts.r_operator(y, z)
            if span.add(operator.reshape(-1)):
                labels.append(r_operator_label(alts, y, z))
                matrices.append(operator)
    k = len(matrices)
    stacked = zeros((k, n, n), exact)
    for i, mat in enumerate(matrices):
        stacked[i] = mat
    structure = zeros((k, k, k), exact)
    for i in range(k):
        for j in range(k):
            commutator = stacked[i] @ stacked[j] - stacked[j] @ stacked[i]
            coords = span.coordinates(commutator.reshape(-1))
            if coords is None:
                raise AxiomViolation(f"[{labels[i]}, {labels[j]}] is not in span of the R operators",
                                     (labels[i], labels[j]))
            structure[i, j] = coords
    return LieAlgebraRealization(labels=tuple(labels), matrices=stacked, structure=structure)


def build_super(alts: AltsTensor, tol: float = DEFAULT_TOL) -> LieSuperalgebra:
    g0 = build_g0(alts, tol)
    k, n = g0.dim, alts.n
    exact = alts.exact
    span = EchelonBasis(n * n, exact=exact, tol=tol)
    for mat in g0.matrices:
        span.add(mat.reshape(-1))
    structure = zeros((k + n, k + n, k + n), exact)
    structure[:k, :k, :k] = g0.structure
    for i in range(k):
        for v in range(n):
            image = g0.matrices[i][:, v]
            structure[i, k + v, k:] = image
            structure[k + v, i, k:] = -image
    for v in range(n):
        for w in range(n):
            coords = span.coordinates(alts.r_operator(v, w).reshape(-1))
            if coords is None:
                raise AxiomViolation(f"R[{alts.labels[v]},{alts.labels[w]}] is outside g0",
                                     (alts.labels[v], alts.labels[w]))
            structure[k + v, k + w, :k] = coords
    return LieSuperalgebra(
        labels=g0.labels + alts.labels,
        parity=(0,) * k + (1,) * n,
        structure=structure,
        parts=(0,) * k + tuple(alts.part(i) for i in range(n)),
        even=g0,
    )


def _sign_matrix(parity: Sequence[int], exact: bool) -> np.ndarray:
    p = np.array(parity, dtype=int)
    signs = np.where(np.outer(p, p) % 2 == 1, -1, 1)
    return signs.astype(object) if exact else signs.astype(float)


def verify_super(sa: LieSuperalgebra, tol: float = DEFAULT_TOL) -> AxiomReport:
    """Graded antisymmetry, graded Jacobi, parity and polarization consistency"""
    c = sa.structure
    labels = sa.labels
    s = _sign_matrix(sa.parity, sa.exact)
    report = AxiomReport(subject="Lie superalgebra", exact=sa.exact, tol=tol)
    report.details["superdimension"] = list(sa.superdimension)
    report.add("graded_antisymmetry", c + s[:, :, None] * np.einsum("yxl->xyl", c),
               [("x", labels), ("y", labels)])
    t1 = np.einsum("yzw,xwl->xyzl", c, c)
    t2 = np.einsum("zxw,ywl->xyzl", c, c)
    t3 = np.einsum("xyw,zwl->xyzl", c, c)
    jacobi = (s[:, None, :, None] * t1
              + s[:, :, None, None] * t2
              + s[None, :, :, None] * t3)
    report.add("graded_jacobi", jacobi, [("x", labels), ("y", labels), ("z", labels)])

    p = np.array(sa.parity)
    wrong_parity = (p[:, None, None] + p[None, :, None]) % 2 != p[None, None, :]
    report.add("parity", np.where(wrong_parity, c, 0), [("x", labels), ("y", labels)], component_axes=1)
    if any(sa.parts):
        parts = np.array(sa.parts)
        same_odd = (parts[:, None] == parts[None, :]) & (parts[:, None] > 0)
        report.add("polarized_odd_brackets", np.where(same_odd[:, :, None], c, 0),
                   [("x", labels), ("y", labels)])
        # [x, V_i] has no component in the other odd part
        leaks = (parts[None, :, None] > 0) & (parts[None, None, :] > 0) & (parts[None, :, None] != parts[None, None, :])
        leaks = np.broadcast_to(leaks, c.shape)
        report.add("polarized_action", np.where(leaks, c, 0), [("x", labels), ("v", labels)])
    return report


def _subset_indices(sa: LieSuperalgebra, subset: Sequence[str]) -> List[int]:
    return [sa.index(label) for label in subset]


def is_ideal(sa: LieSuperalgebra, subset: Sequence[str], ambient: Optional[Sequence[str]] = None) -> bool:
    """
    True when span(subset) is an ideal of span(ambient) (default: the whole algebra)
    """
    inside = set(_subset_indices(sa, subset))
    outside = [i for i in range(sa.dim) if i not in inside]
    if ambient is None:
        ambient_idx = list(range(sa.dim))
    else:
        ambient_idx = _subset_indices(sa, ambient)
        if not inside <= set(ambient_idx):
            raise ContractViolation("the subset must lie inside the ambient subalgebra")
    for x in ambient_idx:
        for s in inside:
            if any(sa.structure[x, s, l] != 0 for l in outside):
                return False
    return True


def is_abelian(sa: LieSuperalgebra, subset: Sequence[str]) -> bool:
    idx = _subset_indices(sa, subset)
    return all(x == 0 for i in idx for j in idx for x in sa.structure[i, j])


def quotient_superdimension(sa: LieSuperalgebra, subset: Sequence[str],
                            ambient: Optional[Sequence[str]] = None) -> Tuple[int, int]:
    idx = set(_subset_indices(sa, subset))
    ambient_idx = range(sa.dim) if ambient is None else _subset_indices(sa, ambient)
    even = sum(1 for i in ambient_idx if i not in idx and sa.parity[i] == 0)
    odd = sum(1 for i in ambient_idx if i not in idx and sa.parity[i] == 1)
    return even, odd


def hom_pair(n: int, m: int, exact: bool = True) -> IsotopicPair:
    """
    (Hom(H1, H2), Hom(H2, H1)) for dim H1 = n, dim H2 = m, realized inside
    End(H1 ⊕ H2) with H1 on the first n coordinates.
    """
    if n < 1 or m < 1:
        raise ContractViolation(f"hom_pair needs positive dimensions, got ({n}, {m})")
    d = n + m
    basis1 = zeros((m * n, d, d), exact)
    basis2 = zeros((m * n, d, d), exact)
    labels1, labels2 = [], []
    one = 1 if exact else 1.0
    k = 0
    for i in range(m):
        for j in range(n):
            basis1[k, n + i, j] = basis1[k, n + i, j] + one
            basis2[k, j, n + i] = basis2[k, j, n + i] + one
            labels1.append(f"X{i + 1}{j + 1}")
            labels2.append(f"A{j + 1}{i + 1}")
            k += 1
    return associative_pair(basis1, basis2, labels1, labels2)


def superalgebra_to_json(sa: LieSuperalgebra) -> Dict[str, Any]:
    entries = []
    for x in range(sa.dim):
        for y in range(sa.dim):
            for z in range(sa.dim):
                value = sa.structure[x, y, z]
                if value != 0:
                    entries.append([sa.labels[x], sa.labels[y], sa.labels[z], scalar_to_json(value)])
    return {
        "labels": list(sa.labels),
        "parity": list(sa.parity),
        "parts": list(sa.parts),
        "superdimension": list(sa.superdimension),
        "structure": entries,
    }
