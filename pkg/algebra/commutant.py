"""
Isocommutants of matrix subspaces.

For a subspace A of End(H) its isocommutant is

    A^¡ = { X in End(H) : AXB - BXA in A for all A, B in A }

computed here as the nullspace of the linear conditions obtained by pairing
AXB - BXA with a basis of the annihilator of A.
"""
import numpy as np

from algebra.errors import ContractViolation
from algebra.isotopic_pair import IsotopicPair, associative_pair, default_labels
from algebra.linear import EchelonBasis, nullspace
from algebra.scalars import DEFAULT_TOL, identity, is_exact, sequence_to_array, zeros


def independent_subset(matrices: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Drop matrices that depend on earlier ones"""
    if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2]:
        raise ContractViolation(f"expected a stack of square matrices, got shape {matrices.shape}")
    d = matrices.shape[1]
    basis = EchelonBasis(d * d, exact=is_exact(matrices), tol=tol)
    kept = [mat for mat in matrices if basis.add(mat.reshape(-1))]
    if not kept:
        return matrices[:0]
    return sequence_to_array(kept)


def iso_commutant(generators: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Basis of the isocommutant of span(generators)

    Args:
        generators: (k, d, d) matrices, dependent ones are allowed

    Returns:
        (m, d, d) basis of A^¡ read off an echelon form (exact inputs give
        exact, reproducible bases)

    Raises:
        ContractViolation: when no generators are given
    """
    if not len(generators):
        raise ContractViolation("iso_commutant needs at least one generator")
    basis = independent_subset(generators, tol)
    d = generators.shape[1]
    span_rows = basis.reshape(len(basis), d * d)
    annihilator = nullspace(span_rows, tol) if len(basis) else None
    blocks = []
    if annihilator is not None and len(annihilator):
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                a, b = basis[i], basis[j]
                operator = np.kron(a, b.T) - np.kron(b, a.T)
                blocks.append(annihilator @ operator)
    constraints = np.concatenate(blocks, axis=0) if blocks else zeros((0, d * d), is_exact(generators))
    solutions = nullspace(constraints, tol)
    return solutions.reshape(len(solutions), d, d)


def commutant_pair(generators: np.ndarray, tol: float = DEFAULT_TOL) -> IsotopicPair:
    """The isotopic pair (A, A^¡) with isocommutator brackets"""
    basis = independent_subset(generators, tol)
    commutant = iso_commutant(basis, tol)
    return associative_pair(basis, commutant,
                            labels1=default_labels("A", len(basis)),
                            labels2=default_labels("X", len(commutant)), tol=tol)


def span_contains(outer: np.ndarray, inner: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True when every matrix of `inner` lies in span(outer)"""
    d = outer.shape[1]
    basis = EchelonBasis(d * d, exact=is_exact(outer), tol=tol)
    for mat in outer:
        basis.add(mat.reshape(-1))
    return all(basis.contains(mat.reshape(-1)) for mat in inner)


def double_commutant_contains(generators: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """A ⊆ A^¡¡"""
    commutant = iso_commutant(generators, tol)
    # the isocommutant of the zero space is all of End(H)
    if not len(commutant):
        return True
    return span_contains(iso_commutant(commutant, tol), generators, tol)


def matrix_units(d: int, exact: bool = True) -> np.ndarray:
    """E_11, E_12, ..., E_dd"""
    return identity(d * d, exact).reshape(d * d, d, d)
