"""JSON formats for states, triples, unitaries, bases and Smith forms.

Exact values travel as scalar strings ("1/2*sqrt(3)"); JSON numbers are
read as floats and put the whole object on the float backend.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import linalg
from .adjoint import LocalUnitary
from .basis import HermitianBasis, custom_basis
from .bloch import BlochTriple, DensityMatrix, decompose
from .scalarfield import ZERO, ComplexScalar, ExactScalar, format_terms, parse_scalar, parse_terms


class FormatError(ValueError):
    """Input file does not match the expected JSON layout."""


def scalar_to_json(x):
    if isinstance(x, ExactScalar):
        return str(x)
    return float(x)


def scalar_from_json(value, where: str = "value"):
    if isinstance(value, bool) or value is None:
        raise FormatError(f"{where}: expected a scalar string or number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return parse_scalar(value)
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from None
    raise FormatError(f"{where}: expected a scalar string or number, got {type(value).__name__}")


def _entry_to_json(x) -> dict:
    if isinstance(x, (ExactScalar, ComplexScalar)):
        return {"re": str(x.real), "im": str(x.imag)}
    c = complex(x)
    return {"re": c.real, "im": c.imag}


def _entry_from_json(e, where: str):
    if not isinstance(e, dict) or set(e) - {"re", "im"} or "re" not in e:
        raise FormatError(f"{where}: expected an object with keys 're' and 'im'")
    re = scalar_from_json(e["re"], where + ".re")
    im = scalar_from_json(e.get("im", "0"), where + ".im")
    if isinstance(re, float) or isinstance(im, float):
        return complex(float(re), float(im))
    return ComplexScalar(re, im) if im else re


def _rows_from_json(rows, where: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"{where}: expected a non-empty list of rows")
    if any(len(r) != len(rows[0]) for r in rows):
        raise FormatError(f"{where}: rows have different lengths")
    vals = [[_entry_from_json(e, f"{where}[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(rows)]
    if any(isinstance(x, complex) for r in vals for x in r):
        return np.array([[complex(x) for x in r] for r in vals], dtype=complex)
    return linalg.exact_array(vals)


def _rows_to_json(a: np.ndarray) -> list:
    return [[_entry_to_json(x) for x in row] for row in a]


def _int_field(data: dict, key: str) -> int:
    value = data.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise FormatError(f"field {key!r} must be a positive integer")
    return value


def density_to_json(rho: DensityMatrix) -> dict:
    return {"d1": rho.d1, "d2": rho.d2, "rows": _rows_to_json(rho.entries)}


def density_from_json(data) -> DensityMatrix:
    if not isinstance(data, dict) or "rows" not in data:
        raise FormatError("density matrix needs fields 'd1', 'd2' and 'rows'")
    d1, d2 = _int_field(data, "d1"), _int_field(data, "d2")
    rows = _rows_from_json(data["rows"], "rows")
    try:
        return DensityMatrix(d1, d2, rows)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _vector_from_json(values, where: str) -> list:
    if not isinstance(values, list):
        raise FormatError(f"{where}: expected a list")
    return [scalar_from_json(x, f"{where}[{k}]") for k, x in enumerate(values)]


def triple_to_json(t: BlochTriple) -> dict:
    return {
        "m": t.m,
        "n": t.n,
        "u": [scalar_to_json(x) for x in t.u],
        "v": [scalar_to_json(x) for x in t.v],
        "W": [[scalar_to_json(x) for x in row] for row in t.W],
    }


def triple_from_json(data) -> BlochTriple:
    if not isinstance(data, dict) or not {"u", "v", "W"} <= set(data):
        raise FormatError("Bloch triple needs fields 'm', 'n', 'u', 'v' and 'W'")
    m, n = _int_field(data, "m"), _int_field(data, "n")
    u = _vector_from_json(data["u"], "u")
    v = _vector_from_json(data["v"], "v")
    if not isinstance(data["W"], list) or len(data["W"]) != m:
        raise FormatError(f"W must have {m} rows")
    W = [_vector_from_json(r, f"W[{i}]") for i, r in enumerate(data["W"])]
    if len(u) != m or len(v) != n or any(len(r) != n for r in W):
        raise FormatError(f"triple sizes do not match m={m}, n={n}")
    floats = any(isinstance(x, float) for x in u + v + [x for r in W for x in r])
    mk = (lambda a: np.array(a, dtype=float).reshape(np.shape(a))) if floats else linalg.exact_array
    try:
        return BlochTriple(mk(u), mk(v), mk(W))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def unitary_to_json(U) -> dict:
    E = U.entries if isinstance(U, LocalUnitary) else linalg.as_matrix(U)
    return {"d": E.shape[0], "rows": _rows_to_json(E)}


def unitary_from_json(data) -> LocalUnitary:
    if not isinstance(data, dict) or "rows" not in data:
        raise FormatError("unitary needs a 'rows' field")
    rows = _rows_from_json(data["rows"], "rows")
    if "d" in data and _int_field(data, "d") != rows.shape[0]:
        raise FormatError("field 'd' does not match the number of rows")
    return LocalUnitary(rows)


def matrix_to_json(a: np.ndarray) -> list:
    return [[scalar_to_json(x) for x in row] for row in a]


def complex_to_text(x) -> str:
    """``"1/2 - 1/2*i"`` style text: the scalar grammar plus the unit ``i``."""
    if isinstance(x, ComplexScalar):
        return format_terms({(0,): x.re, (1,): x.im}, ("i",))
    return str(x)


def complex_from_text(text: str):
    terms = parse_terms(text, ("i",))
    if any(k > 1 for (k,) in terms):
        raise FormatError(f"powers of i are not allowed in {text!r}")
    re, im = terms.get((0,)), terms.get((1,))
    re = re if re is not None else ZERO
    return ComplexScalar(re, im) if im is not None else re


def basis_to_json(basis: HermitianBasis) -> dict:
    return {
        "labels": list(basis.labels),
        "elements": [[[complex_to_text(x) for x in row] for row in e] for e in basis.elements],
    }


def basis_from_json(data) -> HermitianBasis:
    if isinstance(data, list):
        data = {"elements": data}
    if not isinstance(data, dict) or "elements" not in data:
        raise FormatError("basis needs an 'elements' list")
    try:
        mats = [
            linalg.exact_array([[complex_from_text(x) for x in row] for row in e])
            for e in data["elements"]
        ]
        return custom_basis(mats, data.get("labels"))
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from None


def smith_to_json(form) -> dict:
    return form.to_json()


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def load_density(path) -> DensityMatrix:
    return density_from_json(read_json(path))


def load_triple(path) -> BlochTriple:
    """Read either a state file (decomposed on load) or a triple file."""
    data = read_json(path)
    if isinstance(data, dict) and "rows" in data:
        rho = density_from_json(data)
        try:
            return decompose(rho)
        except ValueError as exc:
            raise FormatError(f"{path}: {exc}") from None
    return triple_from_json(data)


def write_json(path, data):
    Path(path).write_text(dumps(data))
