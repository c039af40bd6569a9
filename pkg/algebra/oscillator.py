"""
The isotopic pair of noncanonically coupled oscillators.

V1 = span(p, q, r), V2 = span(a, b, c) with the nonzero brackets

    [p,q]_a = 2ε1 q   [p,r]_a = ε2 r    [p,q]_b = 2ε1 p   [q,r]_b = -ε2 r   [p,q]_c = ε3 r
    [a,b]_p = 2ε̃1 b   [a,c]_p = ε̃2 c    [a,b]_q = 2ε̃1 a   [b,c]_q = -ε̃2 c   [a,b]_r = ε̃3 c

(and their antisymmetric counterparts). The pair axioms hold exactly when

    ε̃1 = -ε1,   ε̃2 = ε2 - 2ε1,   ε3 ε̃3 = ε2 ε̃2.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from algebra.alts import AltsTensor, to_alts
from algebra.errors import ParameterError
from algebra.isotopic_pair import IsotopicPair, rescale_basis
from algebra.scalars import DEFAULT_TOL, Scalar, parse_scalar, scalar_to_json, within_tolerance, zeros
from algebra.superalgebra import LieSuperalgebra, build_super

V1_LABELS = ("p", "q", "r")
V2_LABELS = ("a", "b", "c")


@dataclass(frozen=True)
class EpsilonParams:
    """Coupling constants ε1, ε2, ε3 and their mirrors ε̃1, ε̃2, ε̃3"""
    eps1: Scalar
    eps2: Scalar
    eps3: Scalar
    teps1: Scalar
    teps2: Scalar
    teps3: Scalar

    @property
    def exact(self) -> bool:
        return not any(isinstance(v, float) for v in self.values())

    def values(self) -> Tuple[Scalar, ...]:
        return (self.eps1, self.eps2, self.eps3, self.teps1, self.teps2, self.teps3)

    def as_floats(self) -> "EpsilonParams":
        return EpsilonParams(*(float(v) for v in self.values()))

    def constraint_residuals(self) -> Dict[str, Scalar]:
        return {
            "eps1 + teps1": self.eps1 + self.teps1,
            "teps2 - eps2 + 2 eps1": self.teps2 - self.eps2 + 2 * self.eps1,
            "eps3 teps3 - eps2 teps2": self.eps3 * self.teps3 - self.eps2 * self.teps2,
        }

    @property
    def degeneracies(self) -> Tuple[str, ...]:
        """Names of the genericity conditions that fail"""
        checks = {
            "eps1": self.eps1,
            "eps2": self.eps2,
            "eps3": self.eps3,
            "eps2 + teps2": self.eps2 + self.teps2,
            "eps3 + teps3": self.eps3 + self.teps3,
        }
        return tuple(name for name, value in checks.items() if value == 0)

    def to_json(self) -> Dict[str, object]:
        names = ("eps1", "eps2", "eps3", "teps1", "teps2", "teps3")
        return {name: scalar_to_json(value) for name, value in zip(names, self.values())}


def resolve_params(eps1, eps2, eps3) -> EpsilonParams:
    """
    Derive ε̃1, ε̃2, ε̃3 from ε1, ε2, ε3

    Raises:
        ParameterError: when ε2 = 0 or ε3 = 0 (ε̃3 is then undetermined)
    """
    exact = not any(isinstance(v, float) for v in (eps1, eps2, eps3))
    if exact:
        eps1, eps2, eps3 = parse_scalar(eps1), parse_scalar(eps2), parse_scalar(eps3)
    if eps2 == 0:
        raise ParameterError("eps2 must be nonzero")
    if eps3 == 0:
        raise ParameterError("eps3 must be nonzero")
    teps1 = -eps1
    teps2 = eps2 - 2 * eps1
    teps3 = eps2 * teps2 / eps3
    return EpsilonParams(eps1, eps2, eps3, teps1, teps2, teps3)


def params_from_json(data: Dict[str, object]) -> EpsilonParams:
    """Either the three free constants or all six (checked later by build_pair)"""
    if all(k in data for k in ("teps1", "teps2", "teps3")):
        return EpsilonParams(*(parse_scalar(data[k]) for k in ("eps1", "eps2", "eps3", "teps1", "teps2", "teps3")))
    return resolve_params(data["eps1"], data["eps2"], data["eps3"])


@dataclass(frozen=True, eq=False)
class OscillatorPair:
    params: EpsilonParams
    pair: IsotopicPair
    _cache: Dict[str, object] = field(default_factory=dict, repr=False)

    @property
    def alts(self) -> AltsTensor:
        if "alts" not in self._cache:
            self._cache["alts"] = to_alts(self.pair)
        return self._cache["alts"]

    @property
    def superalgebra(self) -> LieSuperalgebra:
        if "super" not in self._cache:
            self._cache["super"] = build_super(self.alts)
        return self._cache["super"]


def _put(tensor: np.ndarray, iso: int, x: int, y: int, out: int, value: Scalar) -> None:
    tensor[iso, x, y, out] = value
    tensor[iso, y, x, out] = -value


def build_pair(params: EpsilonParams, tol: float = DEFAULT_TOL) -> OscillatorPair:
    """
    Raises:
        ParameterError: when the constants violate the pair constraints
    """
    exact = params.exact
    for name, residual in params.constraint_residuals().items():
        if not within_tolerance(abs(residual), exact, tol):
            raise ParameterError(f"constraint {name} = 0 violated (residual {residual})")
    e1, e2, e3, t1, t2, t3 = params.values()
    p, q, r = 0, 1, 2
    a, b, c = 0, 1, 2
    m1 = zeros((3, 3, 3, 3), exact)
    m2 = zeros((3, 3, 3, 3), exact)
    _put(m1, a, p, q, q, 2 * e1)
    _put(m1, a, p, r, r, e2)
    _put(m1, b, p, q, p, 2 * e1)
    _put(m1, b, q, r, r, -e2)
    _put(m1, c, p, q, r, e3)
    _put(m2, p, a, b, b, 2 * t1)
    _put(m2, p, a, c, c, t2)
    _put(m2, q, a, b, a, 2 * t1)
    _put(m2, q, b, c, c, -t2)
    _put(m2, r, a, b, c, t3)
    pair = IsotopicPair(n1=3, n2=3, m1=m1, m2=m2, labels1=V1_LABELS, labels2=V2_LABELS)
    return OscillatorPair(params=params, pair=pair)


def renormalize_rc(osc: OscillatorPair) -> OscillatorPair:
    """
    Rescale c by ε2/ε3 so that R_{p,c} = R_{b,r} and R_{q,c} = R_{a,r}

    The rescaled pair is again an oscillator pair, with ε3 and ε̃3 replaced
    by ε2 and ε̃2.
    """
    e1, e2, e3, t1, t2, t3 = osc.params.values()
    if e2 == 0 or e3 == 0:
        raise ParameterError("renormalization needs eps2 != 0 and eps3 != 0")
    one = 1 if osc.params.exact else 1.0
    scaled = rescale_basis(osc.pair, [one, one, one], [one, one, e2 / e3])
    params = EpsilonParams(e1, e2, e2, t1, t2, t2)
    return OscillatorPair(params=params, pair=scaled)


# R-operator blocks as printed, V1 in the basis (q, p, r) and V2 in (a, b, c)
PRINTED_R_MATRICES: Dict[str, Tuple[Callable, Callable]] = {
    "R[p,a]": (lambda e: [[2 * e.eps1, 0, 0], [0, 0, 0], [0, 0, e.eps2]],
               lambda e: [[0, 0, 0], [0, 2 * e.teps1, 0], [0, 0, e.teps2]]),
    "R[p,b]": (lambda e: [[0, 0, 0], [2 * e.eps1, 0, 0], [0, 0, 0]],
               lambda e: [[0, 0, 0], [-2 * e.teps1, 0, 0], [0, 0, 0]]),
    "R[q,a]": (lambda e: [[0, -2 * e.eps1, 0], [0, 0, 0], [0, 0, 0]],
               lambda e: [[0, 2 * e.teps1, 0], [0, 0, 0], [0, 0, 0]]),
    "R[q,b]": (lambda e: [[0, 0, 0], [0, -2 * e.eps1, 0], [0, 0, -e.eps2]],
               lambda e: [[-2 * e.teps1, 0, 0], [0, 0, 0], [0, 0, -e.teps2]]),
    "R[p,c]": (lambda e: [[0, 0, 0], [0, 0, 0], [e.eps3, 0, 0]],
               lambda e: [[0, 0, 0], [0, 0, 0], [-e.teps2, 0, 0]]),
    "R[q,c]": (lambda e: [[0, 0, 0], [0, 0, 0], [0, -e.eps3, 0]],
               lambda e: [[0, 0, 0], [0, 0, 0], [0, e.teps2, 0]]),
}

_QPR = [1, 0, 2]


@dataclass
class RMatrixAudit:
    computed: Dict[str, Tuple[np.ndarray, np.ndarray]]
    mismatches: List[Tuple[str, str, int, int]]

    @property
    def consistent(self) -> bool:
        return not self.mismatches


def r_matrices(params: EpsilonParams) -> RMatrixAudit:
    """
    R operators computed from the triple product, compared entry by entry with
    the printed blocks. Mismatches are (operator, side, row, column).
    """
    osc = build_pair(params)
    alts = osc.alts
    computed = {}
    mismatches = []
    exact = params.exact
    for label, (printed1, printed2) in PRINTED_R_MATRICES.items():
        y = V1_LABELS.index(label[2])
        z = 3 + V2_LABELS.index(label[4])
        full = alts.r_operator(y, z)
        block1 = full[np.ix_(_QPR, _QPR)]
        block2 = full[3:, 3:]
        computed[label] = (block1, block2)
        for side, block, printed in (("V1", block1, printed1(params)), ("V2", block2, printed2(params))):
            for i in range(3):
                for j in range(3):
                    if not within_tolerance(abs(block[i, j] - printed[i][j]), exact):
                        mismatches.append((label, side, i, j))
    return RMatrixAudit(computed=computed, mismatches=mismatches)


@dataclass(frozen=True)
class PrintedBracket:
    """One printed (super)commutation relation [left, right] = sum coeff * label"""
    left: str
    right: str
    terms: Dict[str, Callable[[EpsilonParams], Scalar]]
    text: str


def _label(key: str) -> str:
    """R_p_c -> R[p,c]; plain generator names pass through"""
    return f"R[{key[2]},{key[4]}]" if key.startswith("R_") else key


def _pb(left: str, right: str, text: str, **terms) -> PrintedBracket:
    return PrintedBracket(left, right, {_label(k): v for k, v in terms.items()}, text)


def _zero(left: str, right: str) -> PrintedBracket:
    return PrintedBracket(left, right, {}, "0")


def printed_structure_table() -> List[PrintedBracket]:
    """The printed bracket table of g(V1 ⊕ V2), in printed order (duplicates kept)"""
    lines = [_zero(x, y) for x, y in (("q", "p"), ("q", "r"), ("p", "r"), ("a", "b"),
                                      ("a", "c"), ("b", "c"), ("r", "c"))]
    for odd1, odd2 in (("p", "a"), ("q", "a"), ("p", "b"), ("q", "b"), ("p", "c"), ("q", "c")):
        lines.append(_pb(odd1, odd2, f"R[{odd1},{odd2}]", **{f"R_{odd1}_{odd2}": lambda e: 1}))
    lines.append(_pb("r", "a", "(eps2/eps3) R[q,c]", R_q_c=lambda e: e.eps2 / e.eps3))
    lines.append(_pb("r", "b", "(eps2/eps3) R[p,c]", R_p_c=lambda e: e.eps2 / e.eps3))

    lines += [
        _pb("R[p,a]", "q", "2 eps1 q", q=lambda e: 2 * e.eps1), _zero("R[p,a]", "p"),
        _pb("R[p,a]", "r", "eps2 r", r=lambda e: e.eps2),
        _zero("R[q,a]", "q"), _pb("R[q,a]", "p", "-2 eps1 q", q=lambda e: -2 * e.eps1), _zero("R[q,a]", "r"),
        _pb("R[p,b]", "q", "2 eps1 p", p=lambda e: 2 * e.eps1), _zero("R[p,b]", "p"), _zero("R[p,b]", "r"),
        _zero("R[q,b]", "q"), _pb("R[q,b]", "p", "-2 eps1 p", p=lambda e: -2 * e.eps1),
        _pb("R[q,b]", "r", "-eps2 r", r=lambda e: -e.eps2),
        _pb("R[p,c]", "q", "eps3 r", r=lambda e: e.eps3), _zero("R[p,c]", "p"), _zero("R[p,c]", "r"),
        _zero("R[q,c]", "q"), _pb("R[q,c]", "p", "-eps3 r", r=lambda e: -e.eps3), _zero("R[q,c]", "r"),
        _zero("R[p,a]", "a"), _pb("R[p,a]", "b", "2 teps1 b", b=lambda e: 2 * e.teps1),
        _pb("R[p,a]", "c", "teps2 c", c=lambda e: e.teps2),
        _zero("R[q,a]", "a"), _pb("R[q,a]", "b", "2 teps1 a", a=lambda e: 2 * e.teps1), _zero("R[q,a]", "c"),
        _pb("R[p,b]", "a", "-2 teps1 b", b=lambda e: -2 * e.teps1), _zero("R[p,b]", "b"), _zero("R[p,b]", "c"),
        _pb("R[q,b]", "a", "-2 teps1 a", a=lambda e: -2 * e.teps1), _zero("R[q,b]", "b"),
        _pb("R[q,b]", "c", "-teps2 c", c=lambda e: -e.teps2),
        _pb("R[p,c]", "a", "-teps2 c", c=lambda e: -e.teps2), _zero("R[p,c]", "b"), _zero("R[p,c]", "c"),
        _zero("R[q,c]", "a"), _pb("R[q,c]", "b", "teps2 c", c=lambda e: e.teps2), _zero("R[q,c]", "c"),
    ]

    lines += [
        _pb("R[p,a]", "R[p,b]", "-2 eps1 R[p,b]", R_p_b=lambda e: -2 * e.eps1),
        _pb("R[p,a]", "R[q,a]", "2 eps1 R[q,a]", R_q_a=lambda e: 2 * e.eps1),
        _zero("R[p,a]", "R[p,b]"),
        _pb("R[p,a]", "R[p,c]", "teps2 R[p,c]", R_p_c=lambda e: e.teps2),
        _pb("R[p,a]", "R[q,c]", "eps2 R[q,c]", R_q_c=lambda e: e.eps2),
        _pb("R[p,b]", "R[q,a]", "2 eps1 (R[q,b] + R[p,a])",
            R_q_b=lambda e: 2 * e.eps1, R_p_a=lambda e: 2 * e.eps1),
        _pb("R[p,b]", "R[q,b]", "2 eps1 R[p,b]", R_p_b=lambda e: 2 * e.eps1),
        _zero("R[p,b]", "R[p,c]"),
        _pb("R[p,b]", "R[q,c]", "2 eps1 R[p,c]", R_p_c=lambda e: 2 * e.eps1),
        _pb("R[q,a]", "R[q,b]", "-2 eps1 R[q,a]", R_q_a=lambda e: -2 * e.eps1),
        _pb("R[q,a]", "R[p,c]", "-2 eps1 R[p,c]", R_p_c=lambda e: -2 * e.eps1),
        _zero("R[q,a]", "R[q,c]"),
        _pb("R[q,b]", "R[p,c]", "-eps2 R[p,c]", R_p_c=lambda e: -e.eps2),
        _pb("R[q,b]", "R[q,c]", "-teps2 R[q,c]", R_q_c=lambda e: -e.teps2),
        _zero("R[p,c]", "R[q,c]"),
    ]
    return lines


@dataclass
class TableLineAudit:
    line: str
    status: str  # match, mismatch or not-comparable
    computed: Optional[str] = None

    def to_json(self) -> Dict[str, object]:
        return {"line": self.line, "status": self.status, "computed": self.computed}


def _format_vector(sa: LieSuperalgebra, vec: np.ndarray) -> str:
    terms = [f"{scalar_to_json(v)} {label}" for label, v in zip(sa.labels, vec) if v != 0]
    return " + ".join(terms) if terms else "0"


def audit_structure_table(params: EpsilonParams, tol: float = DEFAULT_TOL) -> List[TableLineAudit]:
    """
    Recompute every printed bracket in g(V1 ⊕ V2) at the given couplings and
    classify the line. A line is not comparable when it names an element
    outside the chosen g0 basis (degenerate parameters).
    """
    osc = build_pair(params, tol)
    sa = osc.superalgebra
    results = []
    for line in printed_structure_table():
        text = f"[{line.left}, {line.right}] = {line.text}"
        names = [line.left, line.right] + list(line.terms)
        if any(name not in sa.labels for name in names):
            results.append(TableLineAudit(text, "not-comparable"))
            continue
        computed = sa.bracket(line.left, line.right)
        printed = sa.element({label: fn(osc.params) for label, fn in line.terms.items()})
        exact = sa.exact
        deviation = max((abs(x) for x in (computed - printed)), default=0)
        status = "match" if within_tolerance(deviation, exact, tol) else "mismatch"
        results.append(TableLineAudit(text, status, _format_vector(sa, computed)))
    return results
