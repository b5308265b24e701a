"""Shared text format for matrices, conjugations, subspaces and reports.

A matrix is ``{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}``; a
conjugation is ``{"dim": n, "kernel": <matrix>}``; a subspace is
``{"dim": n, "elements": [<matrix>, ...]}``.  Non-finite numbers are
rejected on read.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .conjugation import Conjugation, make_conjugation
from .errors import ParseError

__all__ = [
    "matrix_to_doc",
    "matrix_from_doc",
    "vector_to_doc",
    "conjugation_to_doc",
    "conjugation_from_doc",
    "subspace_from_doc",
    "loads",
    "dumps",
    "read_doc",
]


def _reject_constant(name: str):
    raise ParseError(f"non-finite number {name} is not allowed")


def loads(text: str) -> Any:
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc


def read_doc(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _num(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("refusing to serialize a non-finite number")
    return x


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, allow_nan=False, default=_default)


def _default(obj):
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return matrix_to_doc(obj)
        if obj.ndim == 1:
            return vector_to_doc(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real), _num(obj.imag)]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_doc(M) -> dict:
    M = np.asarray(M, dtype=complex)
    r, c = M.shape
    return {
        "rows": r,
        "cols": c,
        "data": [[[_num(z.real), _num(z.imag)] for z in row] for row in M],
    }


def vector_to_doc(v) -> list:
    return [[_num(z.real), _num(z.imag)] for z in np.asarray(v, dtype=complex)]


def _entry(e) -> complex:
    if isinstance(e, (int, float)) and not isinstance(e, bool):
        z = complex(e, 0.0)
    elif isinstance(e, list) and len(e) == 2 and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in e):
        z = complex(e[0], e[1])
    else:
        raise ParseError(f"bad matrix entry {e!r}; expected [re, im]")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParseError("non-finite matrix entry")
    return z


def matrix_from_doc(doc) -> np.ndarray:
    if not isinstance(doc, dict) or not {"rows", "cols", "data"} <= doc.keys():
        raise ParseError("matrix document needs 'rows', 'cols', 'data'")
    r, c, data = doc["rows"], doc["cols"], doc["data"]
    if not (isinstance(r, int) and isinstance(c, int)) or r < 0 or c < 0:
        raise ParseError("'rows' and 'cols' must be nonnegative integers")
    if not isinstance(data, list) or len(data) != r or any(not isinstance(row, list) or len(row) != c for row in data):
        raise ParseError(f"'data' must be a {r}x{c} nested array")
    return np.array([[_entry(e) for e in row] for row in data], dtype=complex).reshape(r, c)


def conjugation_to_doc(C: Conjugation) -> dict:
    return {"dim": C.dim, "kernel": matrix_to_doc(C.kernel)}


def kernel_from_doc(doc) -> np.ndarray:
    if not isinstance(doc, dict) or "kernel" not in doc:
        raise ParseError("conjugation document needs 'kernel'")
    K = matrix_from_doc(doc["kernel"])
    if "dim" in doc and doc["dim"] != K.shape[0]:
        raise ParseError(f"'dim' {doc['dim']} disagrees with kernel size {K.shape[0]}")
    return K


def conjugation_from_doc(doc, tol: float = 1e-10) -> Conjugation:
    return make_conjugation(kernel_from_doc(doc), tol)


def subspace_from_doc(doc) -> list[np.ndarray]:
    if isinstance(doc, list):
        elements = doc
    elif isinstance(doc, dict) and "elements" in doc:
        elements = doc["elements"]
    else:
        raise ParseError("subspace document needs 'elements'")
    if not isinstance(elements, list):
        raise ParseError("'elements' must be a list of matrices")
    return [matrix_from_doc(e) for e in elements]
