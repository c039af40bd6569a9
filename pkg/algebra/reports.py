from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.scalars import DEFAULT_TOL, Scalar, is_exact, scalar_to_json, within_tolerance, worst_index


@dataclass
class IdentityResidual:
    """Worst residual of one identity over all basis instances"""
    name: str
    residual: Scalar
    passed: bool
    witness: Optional[Tuple[str, ...]] = None
    required: bool = True

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "residual": scalar_to_json(self.residual),
            "passed": self.passed,
            "witness": list(self.witness) if self.witness else None,
            "required": self.required,
        }


@dataclass
class AxiomReport:
    """Collected identity residuals for one object under test"""
    subject: str
    exact: bool = True
    tol: float = DEFAULT_TOL
    identities: List[IdentityResidual] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.identities if item.required)

    @property
    def residual(self) -> Scalar:
        values = [item.residual for item in self.identities if item.required]
        return max(values) if values else 0

    def get(self, name: str) -> IdentityResidual:
        for item in self.identities:
            if item.name == name:
                return item
        raise KeyError(name)

    def failures(self) -> List[IdentityResidual]:
        return [item for item in self.identities if not item.passed]

    def add(self, name: str, residual: np.ndarray, axes: Sequence[Tuple[str, Sequence[str]]],
            required: bool = True, component_axes: int = 1) -> IdentityResidual:
        """
        Record an identity from its full residual array

        Args:
            name: identity name used in reports
            residual: array indexed by the instance axes, then the component axes
            axes: (axis name, basis labels) for each instance axis, used to
                spell out the worst witness
            required: whether the identity counts towards `passed`
            component_axes: number of trailing component axes
        """
        index, worst = worst_index(residual, component_axes)
        passed = within_tolerance(worst, is_exact(residual), self.tol)
        witness = None
        if not passed and axes:
            witness = tuple(f"{axis}={labels[i]}" for (axis, labels), i in zip(axes, index))
        item = IdentityResidual(name=name, residual=worst, passed=passed, witness=witness, required=required)
        self.identities.append(item)
        return item

    def add_value(self, name: str, residual: Scalar, witness: Optional[Tuple[str, ...]] = None,
                  required: bool = True) -> IdentityResidual:
        passed = within_tolerance(residual, self.exact, self.tol)
        item = IdentityResidual(name=name, residual=residual, passed=passed,
                                witness=None if passed else witness, required=required)
        self.identities.append(item)
        return item

    def merge(self, other: "AxiomReport", prefix: str = "") -> None:
        for item in other.identities:
            self.identities.append(IdentityResidual(prefix + item.name, item.residual, item.passed,
                                                    item.witness, item.required))
        for key, value in other.flags.items():
            self.flags[prefix + key] = value

    def rows(self) -> List[List[Any]]:
        """Rows for a tabulate summary"""
        return [[self.subject, item.name, scalar_to_json(item.residual),
                 "PASS" if item.passed else "FAIL",
                 " ".join(item.witness) if item.witness else ""]
                for item in self.identities]

    def to_json(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "exact": self.exact,
            "tol": self.tol,
            "identities": [item.to_json() for item in self.identities],
            "flags": dict(self.flags),
            "details": self.details,
        }
