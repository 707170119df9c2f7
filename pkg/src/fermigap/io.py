"""JSON file formats for coefficient pairs, structured specs and W matrices.

Pair document:        {"n": int, "a": [n*n reals, row-major], "b": [...]}
Structured document:  {"kind": "circulant"|"bccb"|"bc2cb",
                       "dims": [p] | [p, q] | [p, q, r],
                       "a_root": [...], "b_root": [...]}   (row-major roots)
W document:           {"n": int, "w": [n*n reals, row-major]}
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InputError
from .lattice import Bc2cbSpec, BccbSpec, CirculantSpec, StructuredSpec
from .quadform import CoefficientPair, first_symmetry_violation
from .spinrep import PauliHamiltonian


def _matrix_from_flat(data, n: int, name: str) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (n * n,):
        raise InputError(f"{name} must hold {n * n} values, got {arr.size}")
    return arr.reshape(n, n)


def pair_to_dict(pair: CoefficientPair) -> dict:
    return {"n": pair.n, "a": pair.a.ravel().tolist(), "b": pair.b.ravel().tolist()}


def pair_from_dict(doc: dict) -> CoefficientPair:
    try:
        n = int(doc["n"])
        a = _matrix_from_flat(doc["a"], n, "a")
        b = _matrix_from_flat(doc["b"], n, "b")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed pair document: {exc}") from exc
    viol = first_symmetry_violation(a)
    if viol is not None:
        raise InputError(f"a is not symmetric at index pair {viol}")
    viol = first_symmetry_violation(b, anti=True)
    if viol is not None:
        raise InputError(f"b is not anti-symmetric at index pair {viol}")
    return CoefficientPair(a, b)


_KIND_BY_NDIM = {1: "circulant", 2: "bccb", 3: "bc2cb"}


def structured_to_dict(spec: StructuredSpec) -> dict:
    if isinstance(spec, CirculantSpec):
        a_root, b_root = spec.a_col, spec.b_col
    else:
        a_root, b_root = spec.root_a, spec.root_b
    return {
        "kind": _KIND_BY_NDIM[a_root.ndim],
        "dims": list(spec.dims),
        "a_root": a_root.ravel().tolist(),
        "b_root": b_root.ravel().tolist(),
    }


def structured_from_dict(doc: dict) -> StructuredSpec:
    try:
        kind = doc["kind"]
        dims = [int(d) for d in doc["dims"]]
        a_root = np.asarray(doc["a_root"], dtype=float)
        b_root = np.asarray(doc["b_root"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed structured document: {exc}") from exc
    expected_ndim = {"circulant": 1, "bccb": 2, "bc2cb": 3}.get(kind)
    if expected_ndim is None:
        raise InputError(f"unknown structured kind {kind!r}")
    if len(dims) != expected_ndim:
        raise InputError(f"kind {kind!r} needs {expected_ndim} dims, got {dims}")
    size = int(np.prod(dims))
    if a_root.size != size or b_root.size != size:
        raise InputError(f"roots must hold {size} values for dims {dims}")
    # dims are listed (p[, q[, r]]); root arrays are stored slowest-axis first.
    shape = tuple(reversed(dims))
    a_root = a_root.reshape(shape)
    b_root = b_root.reshape(shape)
    if kind == "circulant":
        return CirculantSpec(a_root, b_root)
    if kind == "bccb":
        return BccbSpec(a_root, b_root)
    return Bc2cbSpec(a_root, b_root)


def w_to_dict(h: PauliHamiltonian) -> dict:
    return {"n": h.n, "w": h.w.ravel().tolist()}


def w_from_dict(doc: dict) -> PauliHamiltonian:
    try:
        n = int(doc["n"])
        w = _matrix_from_flat(doc["w"], n, "w")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed W document: {exc}") from exc
    return PauliHamiltonian(w)


def load_document(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON document {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"top level of {path} must be a JSON object")
    return doc


def load_pair_or_structured(path) -> CoefficientPair | StructuredSpec:
    """Dispatch on the document shape: structured specs carry a 'kind' key."""
    doc = load_document(path)
    if "kind" in doc:
        return structured_from_dict(doc)
    return pair_from_dict(doc)
