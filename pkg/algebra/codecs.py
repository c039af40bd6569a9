"""
JSON documents for structure constants.

Pair documents list the nonzero cells of both tensors:

    {"n1": 3, "n2": 3, "labels1": [...], "labels2": [...],
     "m1": [[isotope, i, j, out, num, den], ...],
     "m2": [[isotope, i, j, out, num, den], ...]}

Cells that are not listed are zero. Matrices elsewhere are nested lists whose
entries are integers, "p/q" strings or (on the float backend) numbers.
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from algebra.errors import ConfigError
from algebra.isotopic_pair import IsotopicPair
from algebra.scalars import array_to_json, as_array, is_exact, zeros


def read_json(path: Path) -> Any:
    """json.load with the file name attached to decode errors"""
    with open(path, 'r') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise json.JSONDecodeError(f"{path}: {exc.msg}", exc.doc, exc.pos) from None


def write_json(path: Path, data: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=4, sort_keys=True)


def require(data: Dict[str, Any], key: str, source: str) -> Any:
    if key not in data:
        raise ConfigError(f"{source}: missing key '{key}'")
    return data[key]


def _cells_to_tensor(cells: List[List[Any]], shape, exact: bool, source: str) -> np.ndarray:
    tensor = zeros(shape, exact)
    for cell in cells:
        if len(cell) != 6:
            raise ConfigError(f"{source}: cell {cell} must be [isotope, i, j, out, num, den]")
        iso, i, j, out, num, den = cell
        try:
            value = Fraction(num) / Fraction(den) if exact else float(num) / float(den)
            tensor[iso, i, j, out] = tensor[iso, i, j, out] + value
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{source}: bad cell {cell}: {exc}")
    return tensor


def pair_from_json(data: Dict[str, Any], source: str = "pair") -> IsotopicPair:
    n1 = int(require(data, "n1", source))
    n2 = int(require(data, "n2", source))
    exact = bool(data.get("exact", True))
    m1 = _cells_to_tensor(require(data, "m1", source), (n2, n1, n1, n1), exact, source)
    m2 = _cells_to_tensor(require(data, "m2", source), (n1, n2, n2, n2), exact, source)
    return IsotopicPair(n1=n1, n2=n2, m1=m1, m2=m2,
                        labels1=tuple(data.get("labels1", ())), labels2=tuple(data.get("labels2", ())))


def _tensor_to_cells(tensor: np.ndarray) -> List[List[Any]]:
    cells = []
    for index in zip(*np.nonzero(tensor != 0)):
        value = tensor[index]
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
        elif isinstance(value, int):
            num, den = value, 1
        else:
            num, den = float(value), 1
        cells.append([int(k) for k in index] + [num, den])
    return cells


def pair_to_json(pair: IsotopicPair) -> Dict[str, Any]:
    return {
        "n1": pair.n1,
        "n2": pair.n2,
        "exact": pair.exact,
        "labels1": list(pair.labels1),
        "labels2": list(pair.labels2),
        "m1": _tensor_to_cells(pair.m1),
        "m2": _tensor_to_cells(pair.m2),
    }


def load_pair(path: Path) -> IsotopicPair:
    return pair_from_json(read_json(path), source=str(path))


def dump_pair(pair: IsotopicPair, path: Path) -> None:
    write_json(path, pair_to_json(pair))


def matrix_from_json(rows: Any, exact: bool, source: str) -> np.ndarray:
    try:
        arr = as_array(rows, exact=exact)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"{source}: bad matrix {rows!r}: {exc}")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ConfigError(f"{source}: expected a square matrix, got shape {arr.shape}")
    return arr


def matrices_from_json(items: List[Any], exact: bool, source: str, dim: int) -> np.ndarray:
    """Stack of dim x dim matrices (an empty list gives shape (0, dim, dim))"""
    out = zeros((len(items), dim, dim), exact)
    for k, rows in enumerate(items):
        mat = matrix_from_json(rows, exact, source)
        if mat.shape != (dim, dim):
            raise ConfigError(f"{source}: matrix {k} has shape {mat.shape}, expected {(dim, dim)}")
        out[k] = mat
    return out


def matrix_to_json(mat: np.ndarray) -> List[List[Any]]:
    return array_to_json(mat) if is_exact(mat) else np.asarray(mat, dtype=float).tolist()
