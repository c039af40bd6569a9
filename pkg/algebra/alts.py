"""
Anti-Lie triple systems.

The triple product lives on V = V1 ⊕ V2 with V1 occupying the first n1
coordinates. `to_alts` applies

    [x y z] = [z, x]_y   when z lies in the part of x
    [x y z] = [y, x]_z   when y lies in the part of x
    [x y z] = 0          when y and z lie in the same part
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from algebra.errors import ContractViolation
from algebra.isotopic_pair import IsotopicPair
from algebra.reports import AxiomReport
from algebra.scalars import DEFAULT_TOL, is_exact, zeros


@dataclass(frozen=True, eq=False)
class AltsTensor:
    """Structure constants t[x, y, z, w] of [e_x e_y e_z] = sum_w t[x, y, z, w] e_w"""
    n: int
    t: np.ndarray
    labels: Tuple[str, ...]
    polarization: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.t.shape != (self.n,) * 4:
            raise ContractViolation(f"triple tensor has shape {self.t.shape}, expected {(self.n,) * 4}")
        if self.polarization is not None and sum(self.polarization) != self.n:
            raise ContractViolation(f"polarization {self.polarization} does not add up to {self.n}")

    @property
    def exact(self) -> bool:
        return is_exact(self.t)

    def part(self, index: int) -> int:
        """1 or 2 for polarized systems, 0 otherwise"""
        if self.polarization is None:
            return 0
        return 1 if index < self.polarization[0] else 2

    def r_operator(self, y: int, z: int) -> np.ndarray:
        """Matrix of R_{y,z} : x -> [x y z] (column x holds the image of e_x)"""
        return self.t[:, y, z, :].T.copy()


def to_alts(pair: IsotopicPair) -> AltsTensor:
    n1, n2 = pair.n1, pair.n2
    n = n1 + n2
    t = zeros((n, n, n, n), pair.exact)
    s1, s2 = slice(0, n1), slice(n1, n)
    # x, z in V1, y in V2: [z, x]_y
    t[s1, s2, s1, s1] = np.einsum("yzxw->xyzw", pair.m1)
    # x, y in V1, z in V2: [y, x]_z
    t[s1, s1, s2, s1] = np.einsum("zyxw->xyzw", pair.m1)
    t[s2, s1, s2, s2] = np.einsum("yzxw->xyzw", pair.m2)
    t[s2, s2, s1, s2] = np.einsum("zyxw->xyzw", pair.m2)
    return AltsTensor(n=n, t=t, labels=pair.labels1 + pair.labels2, polarization=(n1, n2))


def verify_alts(alts: AltsTensor, tol: float = DEFAULT_TOL) -> AxiomReport:
    """
    Check the ALTS axioms:

        [xyz] = [xzy]
        [xyz] + [zxy] + [yzx] = 0
        [[xyz]uv] = [[xuv]yz] + [x[yvu]z] + [xy[zuv]]

    plus the polarization condition for polarized systems.
    """
    t = alts.t
    labels = alts.labels
    report = AxiomReport(subject="anti-Lie triple system", exact=alts.exact, tol=tol)
    report.add("symmetry", t - np.einsum("xzyw->xyzw", t), [("x", labels), ("y", labels), ("z", labels)])
    report.add("cyclic",
               t + np.einsum("zxyw->xyzw", t) + np.einsum("yzxw->xyzw", t),
               [("x", labels), ("y", labels), ("z", labels)])
    lhs = np.einsum("xyzw,wuvl->xyzuvl", t, t)
    rhs = (np.einsum("xuvw,wyzl->xyzuvl", t, t)
           + np.einsum("yvuw,xwzl->xyzuvl", t, t)
           + np.einsum("zuvw,xywl->xyzuvl", t, t))
    report.add("derivation", lhs - rhs,
               [("x", labels), ("y", labels), ("z", labels), ("u", labels), ("v", labels)])
    if alts.polarization is not None:
        n1 = alts.polarization[0]
        same = zeros(t.shape, alts.exact)
        same[:, :n1, :n1, :] = t[:, :n1, :n1, :]
        same[:, n1:, n1:, :] = t[:, n1:, n1:, :]
        report.add("polarization", same, [("x", labels), ("y", labels), ("z", labels)])
    return report
