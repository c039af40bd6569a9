"""
Isotopic pairs given by structure constants.

A pair (V1, V2) carries two families of brackets: for every isotope A in V2 a
bracket [X, Y]_A on V1, and for every isotope X in V1 a bracket [A, B]_X on
V2. The families are stored as rank-4 tensors

    m1[a, i, j, k] = k-th coordinate of [e_i, e_j]_{f_a}   (shape n2, n1, n1, n1)
    m2[x, i, j, k] = k-th coordinate of [f_i, f_j]_{e_x}   (shape n1, n2, n2, n2)
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from algebra.errors import AxiomViolation, ContractViolation
from algebra.linear import EchelonBasis
from algebra.reports import AxiomReport
from algebra.scalars import DEFAULT_TOL, constant, is_exact

V1 = 1
V2 = 2


def default_labels(prefix: str, n: int) -> Tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


@dataclass(frozen=True, eq=False)
class IsotopicPair:
    """Structure constants of an isotopic pair"""
    n1: int
    n2: int
    m1: np.ndarray
    m2: np.ndarray
    labels1: Tuple[str, ...] = ()
    labels2: Tuple[str, ...] = ()
    realization: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None)

    def __post_init__(self):
        if self.m1.shape != (self.n2, self.n1, self.n1, self.n1):
            raise ContractViolation(f"m1 has shape {self.m1.shape}, expected {(self.n2, self.n1, self.n1, self.n1)}")
        if self.m2.shape != (self.n1, self.n2, self.n2, self.n2):
            raise ContractViolation(f"m2 has shape {self.m2.shape}, expected {(self.n1, self.n2, self.n2, self.n2)}")
        if is_exact(self.m1) != is_exact(self.m2):
            raise ContractViolation("m1 and m2 must share a scalar backend")
        if not self.labels1:
            object.__setattr__(self, "labels1", default_labels("u", self.n1))
        if not self.labels2:
            object.__setattr__(self, "labels2", default_labels("v", self.n2))
        if len(self.labels1) != self.n1 or len(self.labels2) != self.n2:
            raise ContractViolation("basis label count does not match the dimensions")
        for arr in (self.m1, self.m2):
            arr.flags.writeable = False

    @property
    def exact(self) -> bool:
        return is_exact(self.m1)

    def tensor(self, side: int) -> np.ndarray:
        return self.m1 if side == V1 else self.m2

    def index(self, label: str) -> Tuple[int, int]:
        """(side, index) of a basis label"""
        if label in self.labels1:
            return V1, self.labels1.index(label)
        if label in self.labels2:
            return V2, self.labels2.index(label)
        raise KeyError(label)


def isobracket(pair: IsotopicPair, side: int, isotope: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Bilinear extension of the structure constants

    Args:
        side: V1 for [x, y]_A with x, y in V1 and A in V2, V2 for the mirror
        isotope: coordinates of the isotope
        x, y: coordinates of the arguments
    """
    tensor = pair.tensor(side)
    n_iso, n = tensor.shape[0], tensor.shape[1]
    if isotope.shape != (n_iso,) or x.shape != (n,) or y.shape != (n,):
        raise ContractViolation(
            f"isobracket on side {side}: isotope {isotope.shape}, x {x.shape}, y {y.shape}; "
            f"expected ({n_iso},), ({n},), ({n},)")
    return np.einsum("a,i,j,aijk->k", isotope, x, y, tensor)


def _nested(outer_first: np.ndarray, outer_second: np.ndarray) -> np.ndarray:
    """[[x, y]_A, z]_B indexed (A, x, y, B, z, out)"""
    return np.einsum("axyk,bkzl->axybzl", outer_first, outer_second)


def _antisymmetry(tensor: np.ndarray) -> np.ndarray:
    return tensor + np.einsum("ayxl->axyl", tensor)


def jacobi_residuals(tensor: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Jacobiator of each bracket of a family and its polarization

    Returns:
        (basis residual indexed (A, x, y, z, out),
         polarized residual indexed (A, B, x, y, z, out))
    """
    nested = np.einsum("axybzl->abxyzl", _nested(tensor, tensor))
    cyclic = (nested
              + np.einsum("abyzxl->abxyzl", nested)
              + np.einsum("abzxyl->abxyzl", nested))
    polarized = cyclic + np.einsum("baxyzl->abxyzl", cyclic)
    basis = np.einsum("aaxyzl->axyzl", cyclic)
    return basis, polarized


def compatibility_residual(inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    """
    [X, Y]_{[A, B]_Z} minus the symmetrized nested brackets

    `inner` holds the brackets on the side of X, Y, Z; `outer` the brackets on
    the side of A, B. Indexed (X, Y, Z, A, B, out).
    """
    lhs = np.einsum("zabc,cxyl->xyzabl", outer, inner)
    nested = _nested(inner, inner)
    s_ab = (np.einsum("axzbyl->xyzabl", nested)
            + np.einsum("axybzl->xyzabl", nested)
            + np.einsum("azybxl->xyzabl", nested))
    s_ba = np.einsum("xyzbal->xyzabl", s_ab)
    return lhs - constant(Fraction(1, 2), inner) * (s_ab - s_ba)


def anti_jordan_residual(inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    """
    [X, Y]_{[A, B]_Z} - [[X, Z]_A, Y]_B - [[Z, Y]_A, X]_B + [[X, Y]_B, Z]_A,
    indexed (X, Y, Z, A, B, out)
    """
    lhs = np.einsum("zabc,cxyl->xyzabl", outer, inner)
    nested = _nested(inner, inner)
    rhs = (np.einsum("axzbyl->xyzabl", nested)
           + np.einsum("azybxl->xyzabl", nested)
           - np.einsum("bxyazl->xyzabl", nested))
    return lhs - rhs


def _axes(pair: IsotopicPair, side: int, names: str) -> list:
    own, other = (pair.labels1, pair.labels2) if side == V1 else (pair.labels2, pair.labels1)
    return [(name, own if name in "XYZUW" else other) for name in names]


def verify_isotopic_pair(pair: IsotopicPair, tol: float = DEFAULT_TOL) -> AxiomReport:
    """
    Check the axioms of an isotopic pair: antisymmetry, Jacobi for every
    isotope and its polarization on both sides, and the two compatibility
    identities. Exact pairs pass only with zero residuals.
    """
    report = AxiomReport(subject="isotopic pair", exact=pair.exact, tol=tol)
    for side, tag in ((V1, "V1"), (V2, "V2")):
        tensor = pair.tensor(side)
        own = pair.labels1 if side == V1 else pair.labels2
        other = pair.labels2 if side == V1 else pair.labels1
        report.add(f"antisymmetry_{tag}", _antisymmetry(tensor), [("A", other), ("X", own), ("Y", own)])
        basis, polarized = jacobi_residuals(tensor)
        report.add(f"jacobi_{tag}", basis, [("A", other), ("X", own), ("Y", own), ("Z", own)])
        report.add(f"polarized_jacobi_{tag}", polarized,
                   [("A", other), ("B", other), ("X", own), ("Y", own), ("Z", own)])
    report.add("compatibility_V1", compatibility_residual(pair.m1, pair.m2), _axes(pair, V1, "XYZAB"))
    report.add("compatibility_V2", compatibility_residual(pair.m2, pair.m1), _axes(pair, V2, "XYZAB"))
    return report


def verify_anti_jordan(pair: IsotopicPair, tol: float = DEFAULT_TOL) -> AxiomReport:
    """Check the two anti-Jordan identities (antisymmetry included)"""
    report = AxiomReport(subject="anti-Jordan pair", exact=pair.exact, tol=tol)
    for side, tag in ((V1, "V1"), (V2, "V2")):
        own = pair.labels1 if side == V1 else pair.labels2
        other = pair.labels2 if side == V1 else pair.labels1
        report.add(f"antisymmetry_{tag}", _antisymmetry(pair.tensor(side)), [("A", other), ("X", own), ("Y", own)])
    report.add("anti_jordan_V1", anti_jordan_residual(pair.m1, pair.m2), _axes(pair, V1, "XYZAB"))
    report.add("anti_jordan_V2", anti_jordan_residual(pair.m2, pair.m1), _axes(pair, V2, "XYZAB"))
    return report


def _coordinates_or_fail(basis: EchelonBasis, matrix: np.ndarray, witness: Tuple[str, ...]) -> np.ndarray:
    coords = basis.coordinates(matrix.reshape(-1))
    if coords is None:
        raise AxiomViolation(f"isocommutator leaves its subspace at {' '.join(witness)}", witness)
    return coords


def _echelon(matrices: np.ndarray, tol: float) -> EchelonBasis:
    exact = is_exact(matrices)
    basis = EchelonBasis(int(np.prod(matrices.shape[1:])), exact=exact, tol=tol)
    for i, mat in enumerate(matrices):
        if not basis.add(mat.reshape(-1)):
            raise ContractViolation(f"basis matrix {i} is linearly dependent on the previous ones")
    return basis


def associative_pair(basis1: np.ndarray, basis2: np.ndarray,
                     labels1: Sequence[str] = (), labels2: Sequence[str] = (),
                     tol: float = DEFAULT_TOL) -> IsotopicPair:
    """
    Pair of two subspaces of a matrix algebra with [X, Y]_A = XAY - YAX

    Args:
        basis1: (n1, d, d) independent matrices spanning V1
        basis2: (n2, d, d) independent matrices spanning V2

    Raises:
        AxiomViolation: when a bracket leaves its subspace
    """
    if basis1.shape[1:] != basis2.shape[1:]:
        raise ContractViolation(f"realizations live in different algebras: {basis1.shape} vs {basis2.shape}")
    labels1 = tuple(labels1) or default_labels("u", len(basis1))
    labels2 = tuple(labels2) or default_labels("v", len(basis2))
    span1, span2 = _echelon(basis1, tol), _echelon(basis2, tol)
    n1, n2 = len(basis1), len(basis2)
    exact = is_exact(basis1)
    m1 = np.empty((n2, n1, n1, n1), dtype=object) if exact else np.zeros((n2, n1, n1, n1))
    m2 = np.empty((n1, n2, n2, n2), dtype=object) if exact else np.zeros((n1, n2, n2, n2))
    for a, iso in enumerate(basis2):
        for i, x in enumerate(basis1):
            for j, y in enumerate(basis1):
                m1[a, i, j] = _coordinates_or_fail(span1, x @ iso @ y - y @ iso @ x,
                                                   (labels1[i], labels1[j], labels2[a]))
    for a, iso in enumerate(basis1):
        for i, x in enumerate(basis2):
            for j, y in enumerate(basis2):
                m2[a, i, j] = _coordinates_or_fail(span2, x @ iso @ y - y @ iso @ x,
                                                   (labels2[i], labels2[j], labels1[a]))
    return IsotopicPair(n1=n1, n2=n2, m1=m1, m2=m2, labels1=labels1, labels2=labels2,
                        realization=(basis1, basis2))


def restrict_pair(pair: IsotopicPair, keep1: Sequence[int], keep2: Sequence[int]) -> IsotopicPair:
    """
    Sub-pair spanned by the given basis vectors

    Raises:
        AxiomViolation: when a retained bracket has a component outside the subset
    """
    keep1, keep2 = list(keep1), list(keep2)
    drop1 = [k for k in range(pair.n1) if k not in keep1]
    drop2 = [k for k in range(pair.n2) if k not in keep2]
    block1 = pair.m1[np.ix_(keep2, keep1, keep1, range(pair.n1))]
    block2 = pair.m2[np.ix_(keep1, keep2, keep2, range(pair.n2))]
    for block, drop, labels in ((block1, drop1, pair.labels1), (block2, drop2, pair.labels2)):
        leak = block[..., drop]
        if any(x != 0 for x in leak.flat):
            raise AxiomViolation(f"subset is not closed: brackets reach {[labels[d] for d in drop]}")
    return IsotopicPair(
        n1=len(keep1), n2=len(keep2),
        m1=np.array(block1[..., keep1]), m2=np.array(block2[..., keep2]),
        labels1=tuple(pair.labels1[k] for k in keep1),
        labels2=tuple(pair.labels2[k] for k in keep2),
    )


def rescale_basis(pair: IsotopicPair, s1: Sequence, s2: Sequence) -> IsotopicPair:
    """Structure constants in the basis s1[i] e_i, s2[a] f_a (all scales nonzero)"""
    s1 = np.array(list(s1), dtype=object if pair.exact else float)
    s2 = np.array(list(s2), dtype=object if pair.exact else float)
    if s1.shape != (pair.n1,) or s2.shape != (pair.n2,):
        raise ContractViolation("one scale per basis vector is required")
    if any(x == 0 for x in s1) or any(x == 0 for x in s2):
        raise ContractViolation("basis scales must be nonzero")
    m1 = (pair.m1 * s2[:, None, None, None] * s1[None, :, None, None] * s1[None, None, :, None]
          / s1[None, None, None, :])
    m2 = (pair.m2 * s1[:, None, None, None] * s2[None, :, None, None] * s2[None, None, :, None]
          / s2[None, None, None, :])
    realization = None
    if pair.realization is not None:
        r1, r2 = pair.realization
        realization = (r1 * s1[:, None, None], r2 * s2[:, None, None])
    return IsotopicPair(n1=pair.n1, n2=pair.n2, m1=m1, m2=m2,
                        labels1=pair.labels1, labels2=pair.labels2, realization=realization)
