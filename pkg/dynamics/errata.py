"""
Printed formulas of the coupled-oscillator model checked against values
computed from the structure constants and the equations of motion.

Classical items are evaluated at a probe state with cos ϑ, sin ϑ and RC all
nonzero, so a wrong sign or factor cannot vanish by accident.
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from algebra.alts import to_alts
from algebra.oscillator import EpsilonParams, V1_LABELS, V2_LABELS, audit_structure_table, build_pair, r_matrices
from algebra.scalars import scalar_to_json
from algebra.superalgebra import build_super, hom_pair
from dynamics.classical import ClassicalState, invariants, predicted_xi_slope, rhs_full

PROBE_STATE = ClassicalState(P=0.6, Q=0.8, R=2.0, A=1.0, B=0.5, C=1.5)
HOM_PAIR_SIZES = ((1, 1), (2, 1), (2, 2))

# Right-hand sides of the printed conservation list: relation -> (printed coefficient, generator)
PRINTED_CONSERVATION_LIST = {
    "PAQ-QAP": (lambda e: 2 * e.eps1, "q"), "PAR-RAP": (lambda e: e.eps2, "r"), "QAR-RAQ": (lambda e: 0, "r"),
    "PBQ-QBP": (lambda e: 2 * e.eps1, "p"), "PBR-RBP": (lambda e: 0, "r"), "QBR-RBQ": (lambda e: -2 * e.eps2, "r"),
    "PCQ-QCP": (lambda e: e.eps3, "r"), "PCR-RCP": (lambda e: 0, "r"), "QCR-RCQ": (lambda e: 0, "r"),
    "APB-BPA": (lambda e: 2 * e.teps1, "b"), "APC-CPA": (lambda e: e.teps2, "c"), "BPC-CPB": (lambda e: 0, "c"),
    "AQB-BQA": (lambda e: 2 * e.teps1, "a"), "AQC-CQA": (lambda e: 0, "c"), "BQC-CQB": (lambda e: -e.teps2, "c"),
    "ARB-BRA": (lambda e: e.teps3, "c"), "BRC-CRB": (lambda e: 0, "c"), "ARC-CRA": (lambda e: 0, "c"),
}


@dataclass
class ErratumEntry:
    item: str
    printed: Any
    computed: Any
    consistent: bool

    def to_json(self) -> Dict[str, Any]:
        return {"item": self.item, "printed": self.printed, "computed": self.computed, "consistent": self.consistent}


def _close(printed: float, computed: float, tol: float = 1e-9) -> bool:
    return abs(printed - computed) <= tol * max(1.0, abs(printed), abs(computed))


def _probe_rates(params: EpsilonParams) -> Dict[str, float]:
    """Rates of the angle variables at the probe state, from the full flow"""
    s, d = PROBE_STATE, rhs_full(PROBE_STATE, params)
    e1, e2, e3, t1, t2, t3 = params.as_floats().values()
    i1sq, i2sq = s.P ** 2 + s.Q ** 2, s.A ** 2 + s.B ** 2
    phi_dot = (s.P * d.Q - s.Q * d.P) / i1sq
    psi_dot = (s.A * d.B - s.B * d.A) / i2sq
    return {
        "phi_dot": phi_dot,
        "psi_dot": psi_dot,
        "theta_dot": phi_dot + psi_dot,
        "chi_dot": e3 * psi_dot - t3 * phi_dot,
        "log_R_dot": d.R / s.R,
        "log_C_dot": d.C / s.C,
        "RC_dot": d.R * s.C + s.R * d.C,
        "mix_dot": d.Q * s.A + s.Q * d.A + d.P * s.B + s.P * d.B,
        "theta": math.atan2(s.Q, s.P) + math.atan2(s.B, s.A),
        "amplitude": math.sqrt(i1sq * i2sq),
    }


def lambda_exponent_entry(params: EpsilonParams) -> ErratumEntry:
    e1, e2, e3, t1, t2, t3 = params.as_floats().values()
    rates = _probe_rates(params)
    printed = (t2 * rates["log_R_dot"] + e2 * rates["log_C_dot"]) / (e2 + t2)
    computed = (t2 * rates["log_R_dot"] - e2 * rates["log_C_dot"]) / (e2 + t2)
    return ErratumEntry("d/dt log Lambda along the flow (C exponent +eps2/(eps2+teps2) printed)",
                        printed, computed, _close(printed, computed))


def conservation_list_entries(params: EpsilonParams) -> List[ErratumEntry]:
    """Printed conservation list against the structure constants, one entry per relation that disagrees"""
    pair = build_pair(params).pair
    entries = []
    for name, (coefficient, generator) in PRINTED_CONSERVATION_LIST.items():
        first, middle, last = name[0].lower(), name[1].lower(), name[2].lower()
        if first in V1_LABELS:
            row = pair.m1[V2_LABELS.index(middle), V1_LABELS.index(first), V1_LABELS.index(last)]
            computed = row[V1_LABELS.index(generator)]
            others = [v for k, v in enumerate(row) if k != V1_LABELS.index(generator)]
        else:
            row = pair.m2[V1_LABELS.index(middle), V2_LABELS.index(first), V2_LABELS.index(last)]
            computed = row[V2_LABELS.index(generator)]
            others = [v for k, v in enumerate(row) if k != V2_LABELS.index(generator)]
        printed = coefficient(params)
        if printed != computed or any(v != 0 for v in others):
            entries.append(ErratumEntry(f"relation {name} = c {generator.upper()}",
                                        scalar_to_json(printed), scalar_to_json(computed), False))
    return entries


def structure_table_entries(params: EpsilonParams) -> List[ErratumEntry]:
    entries = []
    for line in audit_structure_table(params):
        if line.status == "mismatch":
            entries.append(ErratumEntry(f"bracket table line {line.line}", line.line, line.computed, False))
    audit = r_matrices(params)
    entries.append(ErratumEntry("R-operator matrices", "printed blocks",
                                "match" if audit.consistent else f"{len(audit.mismatches)} mismatching entries",
                                audit.consistent))
    return entries


def mixed_integral_entry(params: EpsilonParams) -> ErratumEntry:
    e1, e2, e3, t1, t2, t3 = params.as_floats().values()
    rates = _probe_rates(params)
    k = (e2 + t2) / (e3 + t3)
    printed = rates["RC_dot"] + k * rates["mix_dot"]
    computed = rates["RC_dot"] - k * rates["mix_dot"]
    return ErratumEntry("d/dt L along the flow (L = RC + k(QA+PB) printed)", printed, computed,
                        _close(printed, computed))


def angle_entries(params: EpsilonParams) -> List[ErratumEntry]:
    e1, e2, e3, t1, t2, t3 = params.as_floats().values()
    s = PROBE_STATE
    rates = _probe_rates(params)
    amp, theta = rates["amplitude"], rates["theta"]
    rc = s.R * s.C
    L = invariants(s, params).L
    printed_l = rc + (e2 + t2) / (e3 + t3) * (s.Q * s.A + s.P * s.B)
    entries = []
    for item, printed, computed in (
        ("theta' = -2(eps3+teps3) RC", -2 * (e3 + t3) * rc, rates["theta_dot"]),
        ("theta' = -2L(eps3+teps3) - 2 I1 I2 (eps2+teps2) sin theta",
         -2 * printed_l * (e3 + t3) - 2 * amp * (e2 + t2) * math.sin(theta), rates["theta_dot"]),
        ("chi' = 4 eps1 I1 I2 (eps3-teps3) sin theta",
         4 * e1 * amp * (e3 - t3) * math.sin(theta), rates["chi_dot"]),
        ("xi coefficient of theta: 2 eps1 (eps3-teps3)", 2 * e1 * (e3 - t3), 2 * e1 * (e3 + t3)),
        ("xi slope: 4 L (teps3^2-eps3^2) eps1",
         4 * printed_l * (t3 ** 2 - e3 ** 2) * e1, predicted_xi_slope(params, L)),
    ):
        entries.append(ErratumEntry(item, printed, computed, _close(printed, computed)))
    return entries


def hom_pair_dimension_entries(sizes: Tuple[Tuple[int, int], ...] = HOM_PAIR_SIZES) -> List[ErratumEntry]:
    entries = []
    for n, m in sizes:
        computed = list(build_super(to_alts(hom_pair(n, m))).superdimension)
        printed = [n * n + m * m, 2 * n * m]
        entries.append(ErratumEntry(f"superdimension of g(Hom(C^{n},C^{m}) + Hom(C^{m},C^{n}))",
                                    printed, computed, printed == computed))
    return entries


def errata_audit(params: EpsilonParams) -> List[ErratumEntry]:
    """
    Every audited item, consistent ones included. Classical items need
    eps2 + teps2 and eps3 + teps3 nonzero and are skipped otherwise.
    """
    entries = []
    if params.eps2 + params.teps2 != 0 and params.eps3 + params.teps3 != 0:
        entries.append(lambda_exponent_entry(params))
        entries.append(mixed_integral_entry(params))
        entries += angle_entries(params)
    entries += conservation_list_entries(params)
    entries += structure_table_entries(params)
    entries += hom_pair_dimension_entries()
    return entries
