from fractions import Fraction

import numpy as np

from algebra.errors import ContractViolation
from algebra.isotopic_pair import default_labels
from algebra.reports import AxiomReport
from algebra.scalars import DEFAULT_TOL, constant, is_exact


def _symmetrized(first: np.ndarray, second: np.ndarray, z: np.ndarray) -> np.ndarray:
    """[[X,Z]_A,Y]_B + [[X,Y]_A,Z]_B + [[Z,Y]_A,X]_B indexed (X, Y, out)"""
    return (np.einsum("xjk,j,kyl->xyl", first, z, second)
            + np.einsum("xyk,kjl,j->xyl", first, second, z)
            + np.einsum("jyk,j,kxl->xyl", first, z, second))


def diamond_bracket(bracket_a: np.ndarray, bracket_b: np.ndarray, z: np.ndarray) -> np.ndarray:
    """
    The bracket A ◊_Z B:

        [X, Y]_{A◊_Z B} = 1/2 ( [[X,Z]_A,Y]_B + [[X,Y]_A,Z]_B + [[Z,Y]_A,X]_B
                              - [[X,Z]_B,Y]_A - [[X,Y]_B,Z]_A - [[Z,Y]_B,X]_A )

    Args:
        bracket_a, bracket_b: (n, n, n) structure tensors [e_i, e_j] = sum_k t[i, j, k] e_k
        z: coordinates of Z

    Returns:
        (n, n, n) structure tensor of the composite bracket
    """
    n = bracket_a.shape[0]
    if bracket_a.shape != (n, n, n) or bracket_b.shape != (n, n, n) or z.shape != (n,):
        raise ContractViolation(
            f"diamond_bracket: shapes {bracket_a.shape}, {bracket_b.shape}, {z.shape} do not agree")
    half = constant(Fraction(1, 2), bracket_a)
    return half * (_symmetrized(bracket_a, bracket_b, z) - _symmetrized(bracket_b, bracket_a, z))


def is_lie(bracket: np.ndarray, tol: float = DEFAULT_TOL, labels=()) -> AxiomReport:
    """Antisymmetry and the Jacobi identity of a single bracket"""
    n = bracket.shape[0]
    labels = tuple(labels) or default_labels("e", n)
    report = AxiomReport(subject="Lie bracket", exact=is_exact(bracket), tol=tol)
    report.add("antisymmetry", bracket + np.einsum("yxl->xyl", bracket), [("X", labels), ("Y", labels)])
    nested = np.einsum("xyk,kzl->xyzl", bracket, bracket)
    jacobi = nested + np.einsum("yzxl->xyzl", nested) + np.einsum("zxyl->xyzl", nested)
    report.add("jacobi", jacobi, [("X", labels), ("Y", labels), ("Z", labels)])
    return report
