"""
Lie g-bunches, their enlargement to isotopic pairs, and isorepresentations.

A Lie g-bunch is a g-module V with a g-equivariant linear family of Lie
brackets [·,·]_A (A in g). It is complete when every A ◊_X B is again a
bracket of the family, A ◊_X B = [·,·]_C for some C in g.

An isorepresentation of g is a pair (Q, T) with
T(X) Q T(Y) - T(Y) Q T(X) = T([X, Y]).
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from algebra.codecs import matrices_from_json, matrix_from_json, read_json, require
from algebra.diamond import diamond_bracket, is_lie
from algebra.errors import ConfigError, ContractViolation, IncompleteBunchError
from algebra.isotopic_pair import IsotopicPair, default_labels, jacobi_residuals
from algebra.linear import inverse, nullspace, rank, solve
from algebra.reports import AxiomReport
from algebra.representations import PairRepresentation, verify_representation
from algebra.scalars import DEFAULT_TOL, as_array, identity, is_exact, parse_scalar, unit_vector, zeros


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    """Structure constants c[i, j, k] with [e_i, e_j] = sum_k c[i, j, k] e_k"""
    labels: Tuple[str, ...]
    structure: np.ndarray

    def __post_init__(self):
        n = len(self.labels)
        if self.structure.shape != (n, n, n):
            raise ContractViolation(f"structure constants have shape {self.structure.shape}, expected {(n, n, n)}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def exact(self) -> bool:
        return is_exact(self.structure)


def sl2(exact: bool = True) -> LieAlgebraSpec:
    """Basis (e, h, f): [e, f] = h, [h, e] = 2e, [h, f] = -2f"""
    c = zeros((3, 3, 3), exact)
    e, h, f = 0, 1, 2
    for x, y, z, value in ((e, f, h, 1), (h, e, e, 2), (h, f, f, -2)):
        c[x, y, z] = c[x, y, z] + value
        c[y, x, z] = c[y, x, z] - value
    return LieAlgebraSpec(labels=("e", "h", "f"), structure=c)


def abelian(n: int, exact: bool = True) -> LieAlgebraSpec:
    return LieAlgebraSpec(labels=default_labels("x", n), structure=zeros((n, n, n), exact))


def verify_lie_algebra(g: LieAlgebraSpec, tol: float = DEFAULT_TOL) -> AxiomReport:
    report = is_lie(g.structure, tol, g.labels)
    report.subject = "Lie algebra"
    return report


def adjoint_matrices(g: LieAlgebraSpec) -> np.ndarray:
    """ad(e_x)[k, j] = c[x, j, k]"""
    return np.swapaxes(g.structure, 1, 2).copy()


def module_residual(g: LieAlgebraSpec, action: np.ndarray) -> np.ndarray:
    """[ρ(X), ρ(Y)] - ρ([X, Y]) indexed (X, Y, i, j)"""
    products = np.einsum("xij,yjk->xyik", action, action)
    return products - np.einsum("yxik->xyik", products) - np.einsum("xyz,zik->xyik", g.structure, action)


@dataclass(frozen=True, eq=False)
class LieBunch:
    """
    action[x] is the matrix of e_x on V (column j holds e_x . v_j);
    brackets[a, i, j, k] is the k-th coordinate of [v_i, v_j]_{e_a}.
    """
    g: LieAlgebraSpec
    action: np.ndarray
    brackets: np.ndarray
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        n = self.action.shape[1] if self.action.ndim == 3 else 0
        if self.action.shape != (self.g.dim, n, n):
            raise ContractViolation(f"action has shape {self.action.shape}, expected {(self.g.dim, n, n)}")
        if self.brackets.shape != (self.g.dim, n, n, n):
            raise ContractViolation(f"brackets have shape {self.brackets.shape}, expected {(self.g.dim, n, n, n)}")
        if not self.labels:
            object.__setattr__(self, "labels", default_labels("v", n))

    @property
    def dim(self) -> int:
        return self.action.shape[1]


def zero_bunch(g: LieAlgebraSpec) -> LieBunch:
    exact = g.exact
    return LieBunch(g=g, action=zeros((g.dim, 0, 0), exact), brackets=zeros((g.dim, 0, 0, 0), exact))


@dataclass
class BunchVerification:
    report: AxiomReport
    complete: bool
    witness: Optional[Tuple[str, str, str]] = None
    diamond_coefficients: Optional[np.ndarray] = field(default=None, repr=False)


def verify_bunch(bunch: LieBunch, tol: float = DEFAULT_TOL) -> BunchVerification:
    """
    Module axioms, per-isotope Jacobi and its polarization, equivariance and
    completeness (decided by an exact linear solve on rational input)
    """
    g, rho, br = bunch.g, bunch.action, bunch.brackets
    gl, vl = g.labels, bunch.labels
    report = AxiomReport(subject="Lie bunch", exact=g.exact, tol=tol)
    report.add("module", module_residual(g, rho), [("X", gl), ("Y", gl)], component_axes=2)
    report.add("antisymmetry", br + np.einsum("ayxl->axyl", br), [("A", gl), ("u", vl), ("v", vl)])
    basis, polarized = jacobi_residuals(br)
    report.add("jacobi", basis, [("A", gl), ("u", vl), ("v", vl), ("w", vl)])
    report.add("polarized_jacobi", polarized, [("A", gl), ("B", gl), ("u", vl), ("v", vl), ("w", vl)])
    acted = np.einsum("auvw,xlw->xauvl", br, rho)
    leibniz = (np.einsum("xku,akvl->xauvl", rho, br)
               + np.einsum("xkv,aukl->xauvl", rho, br)
               + np.einsum("xab,buvl->xauvl", g.structure, br))
    report.add("equivariance", acted - leibniz, [("X", gl), ("A", gl), ("u", vl), ("v", vl)])

    n = bunch.dim
    family = br.reshape(g.dim, -1).T
    coefficients = zeros((g.dim, g.dim, n, g.dim), g.exact)
    complete, witness = True, None
    for a in range(g.dim):
        for b in range(g.dim):
            for x in range(n):
                target = diamond_bracket(br[a], br[b], unit_vector(n, x, g.exact)).reshape(-1)
                c = solve(family, target, tol)
                if c is None:
                    if complete:
                        complete, witness = False, (gl[a], gl[b], vl[x])
                    continue
                coefficients[a, b, x] = c
    report.flags["complete"] = complete
    if witness:
        report.details["incomplete_at"] = list(witness)
    return BunchVerification(report=report, complete=complete, witness=witness,
                             diamond_coefficients=coefficients if complete else None)


def enlarge_bunch(bunch: LieBunch, verification: Optional[BunchVerification] = None,
                  tol: float = DEFAULT_TOL) -> IsotopicPair:
    """
    The isotopic pair (V ⊕ C, g) of a complete bunch:

        [(X, λ), (Y, μ)]_A = ([X, Y]_A + λ A(Y) - μ A(X), 0)
        [A, B]_{(X, λ)}    = A ◊_X B + λ [A, B]

    Raises:
        IncompleteBunchError: when some A ◊_X B is not in the family
    """
    verification = verification or verify_bunch(bunch, tol)
    if not verification.complete:
        raise IncompleteBunchError(f"bunch is incomplete at {verification.witness}", verification.witness)
    g, n = bunch.g, bunch.dim
    exact = g.exact
    m1 = zeros((g.dim, n + 1, n + 1, n + 1), exact)
    m1[:, :n, :n, :n] = bunch.brackets
    transposed = np.swapaxes(bunch.action, 1, 2)
    m1[:, n, :n, :n] = transposed
    m1[:, :n, n, :n] = -transposed
    m2 = zeros((n + 1, g.dim, g.dim, g.dim), exact)
    m2[:n] = np.moveaxis(verification.diamond_coefficients, 2, 0)
    m2[n] = g.structure
    return IsotopicPair(n1=n + 1, n2=g.dim, m1=m1, m2=m2,
                        labels1=bunch.labels + ("1",), labels2=g.labels)


def iso_pair(g: LieAlgebraSpec) -> IsotopicPair:
    """I(g) = (C, g) with [A, B]_λ = λ [A, B]; the enlargement of the zero bunch"""
    m1 = zeros((g.dim, 1, 1, 1), g.exact)
    return IsotopicPair(n1=1, n2=g.dim, m1=m1, m2=g.structure[None].copy(), labels1=("1",), labels2=g.labels)


@dataclass(frozen=True, eq=False)
class Isorep:
    g: LieAlgebraSpec
    q: np.ndarray
    t: np.ndarray
    grading: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        d = self.q.shape[0]
        if self.q.shape != (d, d) or self.t.shape != (self.g.dim, d, d):
            raise ContractViolation(f"isorep shapes Q {self.q.shape}, T {self.t.shape} do not agree")

    @property
    def dim(self) -> int:
        return self.q.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.q)


def isorep_residual(g: LieAlgebraSpec, q: np.ndarray, t: np.ndarray) -> np.ndarray:
    """T(X) Q T(Y) - T(Y) Q T(X) - T([X, Y]) indexed (X, Y, i, j)"""
    cubic = np.einsum("xij,jk,ykl->xyil", t, q, t)
    return cubic - np.einsum("yxil->xyil", cubic) - np.einsum("xyz,zil->xyil", g.structure, t)


def isorep_as_representation(iso: Isorep) -> PairRepresentation:
    """The representation of I(g) with T1(1) = Q and T2 = T"""
    return PairRepresentation(dim=iso.dim, t1=iso.q[None, :, :].copy(), t2=iso.t.copy(), grading=iso.grading)


def verify_isorep(iso: Isorep, tol: float = DEFAULT_TOL) -> AxiomReport:
    """
    Direct check of the isorepresentation relation, cross-checked against
    verify_representation on I(g); the flag `agrees_with_iso_pair` records
    whether both verdicts coincide.
    """
    report = AxiomReport(subject="isorepresentation", exact=iso.exact, tol=tol)
    report.add("isorep_relation", isorep_residual(iso.g, iso.q, iso.t),
               [("X", iso.g.labels), ("Y", iso.g.labels)], component_axes=2)
    as_rep = verify_representation(isorep_as_representation(iso), iso_pair(iso.g), tol)
    report.flags["valid"] = report.passed
    report.flags["agrees_with_iso_pair"] = as_rep.flags["valid"] == report.passed
    return report


@dataclass
class ConvertedPair:
    """Two objects produced from one by an invertible Q, with their checks"""
    plus: Union[np.ndarray, Isorep]
    minus: Union[np.ndarray, Isorep]
    report: AxiomReport


def isorep_to_representations(iso: Isorep, tol: float = DEFAULT_TOL) -> ConvertedPair:
    """T+(X) = Q T(X) and T-(X) = T(X) Q are representations of g"""
    plus = np.einsum("ij,xjk->xik", iso.q, iso.t)
    minus = np.einsum("xij,jk->xik", iso.t, iso.q)
    report = AxiomReport(subject="isorep -> representations", exact=iso.exact, tol=tol)
    report.add("plus_is_representation", module_residual(iso.g, plus), [("X", iso.g.labels), ("Y", iso.g.labels)],
               component_axes=2)
    report.add("minus_is_representation", module_residual(iso.g, minus), [("X", iso.g.labels), ("Y", iso.g.labels)],
               component_axes=2)
    return ConvertedPair(plus=np.array(plus), minus=np.array(minus), report=report)


def representation_to_isoreps(g: LieAlgebraSpec, t: np.ndarray, q: np.ndarray,
                              tol: float = DEFAULT_TOL) -> ConvertedPair:
    """
    T+_Q(X) = Q^{-1} T(X) and T-_Q(X) = T(X) Q^{-1} are isorepresentations
    with the same Q

    Raises:
        SingularMatrixError: when Q is not invertible
    """
    q_inv = inverse(q, tol)
    plus = Isorep(g=g, q=q, t=np.array(np.einsum("ij,xjk->xik", q_inv, t)))
    minus = Isorep(g=g, q=q, t=np.array(np.einsum("xij,jk->xik", t, q_inv)))
    report = AxiomReport(subject="representation -> isoreps", exact=is_exact(q), tol=tol)
    report.add("input_is_representation", module_residual(g, t), [("X", g.labels), ("Y", g.labels)], component_axes=2)
    report.add("plus_is_isorep", isorep_residual(g, q, plus.t), [("X", g.labels), ("Y", g.labels)], component_axes=2)
    report.add("minus_is_isorep", isorep_residual(g, q, minus.t), [("X", g.labels), ("Y", g.labels)], component_axes=2)
    return ConvertedPair(plus=plus, minus=minus, report=report)


def convert_isorep(source: Union[Isorep, Tuple[LieAlgebraSpec, np.ndarray]], q: Optional[np.ndarray] = None,
                   tol: float = DEFAULT_TOL) -> ConvertedPair:
    """Isorep -> (T+, T-); (g, representation matrices) with invertible Q -> (T+_Q, T-_Q)"""
    if isinstance(source, Isorep):
        return isorep_to_representations(source, tol)
    if q is None:
        raise ContractViolation("converting a representation needs an invertible Q")
    g, t = source
    return representation_to_isoreps(g, t, q, tol)


def standard_isorep(g: LieAlgebraSpec) -> Isorep:
    """V = ad ⊕ ad, Q = [[0, 0], [E, 0]], T(X) = [[0, ad X], [0, 0]]"""
    n = g.dim
    exact = g.exact
    q = zeros((2 * n, 2 * n), exact)
    q[n:, :n] = identity(n, exact)
    t = zeros((n, 2 * n, 2 * n), exact)
    t[:, :n, n:] = adjoint_matrices(g)
    return Isorep(g=g, q=q, t=t, grading=(n, n))


def two_dim_isorep(exact: bool = True) -> Isorep:
    """One-dimensional g acting on C^2 by T = [[0, 1], [0, 0]] with Q = [[0, 0], [1, 0]]"""
    q = as_array([[0, 0], [1, 0]], exact)
    t = as_array([[[0, 1], [0, 0]]], exact)
    return Isorep(g=abelian(1, exact), q=q, t=t, grading=(1, 1))


@dataclass
class SplitStructure:
    """Blocks of a split isorepresentation and the induced g-actions on W1 and W2"""
    report: AxiomReport
    q_block: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    q_invertible: bool
    intertwiner_dimension: int


def split_structure_check(iso: Isorep, grading: Optional[Tuple[int, int]] = None,
                          tol: float = DEFAULT_TOL) -> SplitStructure:
    """
    For a split isorep (Q : W1 -> W2, T(g) : W2 -> W1) check that
    ρ1(X) = t(X) q and ρ2(X) = q t(X) are representations. q ρ1(X) = ρ2(X) q
    holds identically, so the report records whether q is an isomorphism and
    the dimension of the space of all intertwiners W1 -> W2 instead.
    """
    grading = grading or iso.grading
    if grading is None or sum(grading) != iso.dim:
        raise ContractViolation(f"a grading (d1, d2) adding up to {iso.dim} is required")
    d1 = grading[0]
    w1, w2 = slice(0, d1), slice(d1, iso.dim)
    gl = iso.g.labels
    report = AxiomReport(subject="split isorep structure", exact=iso.exact, tol=tol)
    q_mask = np.ones((iso.dim, iso.dim), dtype=bool)
    q_mask[w2, w1] = False
    t_mask = np.ones((iso.dim, iso.dim), dtype=bool)
    t_mask[w1, w2] = False
    report.add_value("q_block_shape", max((abs(x) for x in iso.q[q_mask]), default=0))
    report.add("t_block_shape", np.where(t_mask[None], iso.t, 0), [("X", gl)], component_axes=2)
    q_block = np.array(iso.q[w2, w1])
    t_blocks = np.array(iso.t[:, w1, w2])
    rho1 = np.einsum("xij,jk->xik", t_blocks, q_block)
    rho2 = np.einsum("ij,xjk->xik", q_block, t_blocks)
    report.add("rho1_representation", module_residual(iso.g, rho1), [("X", gl), ("Y", gl)], component_axes=2)
    report.add("rho2_representation", module_residual(iso.g, rho2), [("X", gl), ("Y", gl)], component_axes=2)
    d2 = iso.dim - d1
    q_invertible = d1 == d2 and rank(q_block, tol) == d1
    exact = iso.exact
    # S : W1 -> W2 with S ρ1(X) = ρ2(X) S, in row-major coordinates
    blocks = [np.kron(identity(d2, exact), r1.T) - np.kron(r2, identity(d1, exact)) for r1, r2 in zip(rho1, rho2)]
    if blocks:
        intertwiners = nullspace(np.concatenate(blocks, axis=0), tol)
    else:
        intertwiners = identity(d1 * d2, exact)
    report.flags["q_invertible"] = q_invertible
    report.details["intertwiner_dimension"] = len(intertwiners)
    return SplitStructure(report=report, q_block=q_block, rho1=rho1, rho2=rho2,
                          q_invertible=q_invertible, intertwiner_dimension=len(intertwiners))


def _scalar(value: Any, exact: bool, source: str):
    try:
        return parse_scalar(value) if exact else float(parse_scalar(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{source}: bad scalar {value!r}: {exc}")


def lie_algebra_from_json(data: Dict[str, Any], source: str = "lie algebra") -> LieAlgebraSpec:
    """{"labels": [...], "structure": [[i, j, k, value], ...]} listing [e_i, e_j] cells"""
    labels = tuple(require(data, "labels", source))
    exact = bool(data.get("exact", True))
    n = len(labels)
    c = zeros((n, n, n), exact)
    for cell in require(data, "structure", source):
        if len(cell) != 4:
            raise ConfigError(f"{source}: structure cell {cell} must be [i, j, k, value]")
        i, j, k, value = cell
        index = [labels.index(x) if isinstance(x, str) else int(x) for x in (i, j, k)]
        c[tuple(index)] = c[tuple(index)] + _scalar(value, exact, source)
    return LieAlgebraSpec(labels=labels, structure=c)


def bunch_from_json(data: Dict[str, Any], source: str = "bunch") -> LieBunch:
    g = lie_algebra_from_json(require(data, "g", source), source + ".g")
    n = int(require(data, "dimV", source))
    exact = g.exact
    action = matrices_from_json(require(data, "action", source), exact, source, n)
    if action.shape[0] != g.dim:
        raise ConfigError(f"{source}: one action matrix per basis element of g is required")
    brackets = zeros((g.dim, n, n, n), exact)
    for cell in data.get("brackets", []):
        if len(cell) != 5:
            raise ConfigError(f"{source}: bracket cell {cell} must be [A, i, j, k, value]")
        a, i, j, k, value = cell
        a = g.labels.index(a) if isinstance(a, str) else int(a)
        brackets[a, i, j, k] = brackets[a, i, j, k] + _scalar(value, exact, source)
    return LieBunch(g=g, action=action, brackets=brackets, labels=tuple(data.get("labelsV", ())))


def isorep_from_json(data: Dict[str, Any], source: str = "isorep") -> Isorep:
    g = lie_algebra_from_json(require(data, "g", source), source + ".g")
    q = matrix_from_json(require(data, "Q", source), g.exact, source)
    t = matrices_from_json(require(data, "T", source), g.exact, source, q.shape[0])
    grading = data.get("grading")
    return Isorep(g=g, q=q, t=t, grading=tuple(grading) if grading else None)


def load_lie_algebra(path: Path) -> LieAlgebraSpec:
    return lie_algebra_from_json(read_json(path), str(path))


def load_bunch(path: Path) -> LieBunch:
    return bunch_from_json(read_json(path), str(path))


def load_isorep(path: Path) -> Isorep:
    return isorep_from_json(read_json(path), str(path))
