"""JSON formats for algebras, Gmas, linear maps and bilinear maps.

Structure is checked with JSON Schema first, then shapes and residues, so a
bad document is reported with the JSON path of the first offending value.
"""

from __future__ import annotations

from typing import Any

import jsonschema
import numpy as np

from .algebra import Algebra, LinearMap
from .gma import Bimodule, Gma, MoritaContext, make_gma
from .traces import BilinearMap


class SpecError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


_INT = {"type": "integer"}
_VEC = {"type": "array", "items": _INT}
_MAT = {"type": "array", "items": _VEC}
_TEN = {"type": "array", "items": _MAT}

ALGEBRA_SCHEMA = {
    "type": "object",
    "required": ["p", "dim", "unit", "mult"],
    "properties": {"p": _INT, "dim": {"type": "integer", "minimum": 1}, "unit": _VEC, "mult": _TEN},
}
MODULE_SCHEMA = {
    "type": "object",
    "required": ["dim", "left", "right"],
    "properties": {"dim": {"type": "integer", "minimum": 0}, "left": _TEN, "right": _TEN},
}
GMA_SCHEMA = {
    "type": "object",
    "required": ["p", "A", "B", "M", "N", "phiMN", "psiNM"],
    "properties": {
        "p": _INT, "A": ALGEBRA_SCHEMA, "B": ALGEBRA_SCHEMA,
        "M": MODULE_SCHEMA, "N": MODULE_SCHEMA, "phiMN": _TEN, "psiNM": _TEN,
    },
}
LINEAR_SCHEMA = {
    "type": "object",
    "required": ["source_dim", "target_dim", "matrix"],
    "properties": {"source_dim": {"type": "integer", "minimum": 0},
                   "target_dim": {"type": "integer", "minimum": 0}, "matrix": _MAT},
}
BILINEAR_SCHEMA = {
    "type": "object",
    "required": ["dim", "tensor"],
    "properties": {"dim": {"type": "integer", "minimum": 1}, "tensor": _TEN},
}


def _validate(doc: Any, schema: dict, root: str) -> None:
    v = jsonschema.Draft202012Validator(schema)
    errors = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = root + e.json_path[1:]
        raise SpecError(path, e.message)


def _array(value, shape: tuple[int, ...], p: int, path: str) -> np.ndarray:
    """Nested list to an int64 array of the given shape with residues in [0, p)."""
    def walk(v, depth: int, where: str):
        if depth == len(shape):
            if not 0 <= v < p:
                raise SpecError(where, f"residue {v} outside [0, {p})")
            return
        if not isinstance(v, list) or len(v) != shape[depth]:
            got = len(v) if isinstance(v, list) else type(v).__name__
            raise SpecError(where, f"expected length {shape[depth]}, got {got}")
        for i, x in enumerate(v):
            walk(x, depth + 1, f"{where}[{i}]")

    walk(value, 0, path)
    return np.asarray(value, dtype=np.int64).reshape(shape)


def _tolist(a: np.ndarray) -> list:
    return np.asarray(a).tolist()


# -- algebras --------------------------------------------------------------------

def algebra_to_json(a: Algebra) -> dict:
    return {"p": a.p, "dim": a.dim, "unit": _tolist(a.unit), "mult": _tolist(a.mult)}


def algebra_from_json(doc: Any, path: str = "$", p: int | None = None) -> Algebra:
    _validate(doc, ALGEBRA_SCHEMA, path)
    q = doc["p"]
    if p is not None and q != p:
        raise SpecError(f"{path}.p", f"modulus {q} differs from enclosing modulus {p}")
    try:
        from .field import check_modulus

        check_modulus(q)
    except ValueError as exc:
        raise SpecError(f"{path}.p", str(exc)) from None
    d = doc["dim"]
    unit = _array(doc["unit"], (d,), q, f"{path}.unit")
    mult = _array(doc["mult"], (d, d, d), q, f"{path}.mult")
    return Algebra(q, mult, unit)


# -- Gmas ------------------------------------------------------------------------

def _module_to_json(m: Bimodule) -> dict:
    return {"dim": m.dim, "left": _tolist(m.left), "right": _tolist(m.right)}


def gma_to_json(g: Gma) -> dict:
    c = g.context
    return {
        "p": g.p,
        "A": algebra_to_json(c.A),
        "B": algebra_to_json(c.B),
        "M": _module_to_json(c.M),
        "N": _module_to_json(c.N),
        "phiMN": _tolist(c.phi),
        "psiNM": _tolist(c.psi),
    }


def _ragged(value, shape, p, path):
    # numpy cannot infer trailing zero-length axes from nested lists, so the
    # shape is checked element-wise and rebuilt explicitly
    if 0 in shape:
        def walk(v, depth, where):
            if depth == len(shape):
                return
            if not isinstance(v, list) or len(v) != shape[depth]:
                got = len(v) if isinstance(v, list) else type(v).__name__
                raise SpecError(where, f"expected length {shape[depth]}, got {got}")
            for i, x in enumerate(v):
                walk(x, depth + 1, f"{where}[{i}]")
        walk(value, 0, path)
        return np.zeros(shape, dtype=np.int64)
    return _array(value, shape, p, path)


def gma_from_json(doc: Any, path: str = "$") -> Gma:
    _validate(doc, GMA_SCHEMA, path)
    p = doc["p"]
    A = algebra_from_json(doc["A"], f"{path}.A", p)
    B = algebra_from_json(doc["B"], f"{path}.B", p)
    dm, dn = doc["M"]["dim"], doc["N"]["dim"]
    if dm == 0 and dn == 0:
        raise SpecError(f"{path}.M.dim", "at least one of M, N must be nonzero")
    M = Bimodule(A, B, dm,
                 _ragged(doc["M"]["left"], (A.dim, dm, dm), p, f"{path}.M.left"),
                 _ragged(doc["M"]["right"], (dm, B.dim, dm), p, f"{path}.M.right"))
    N = Bimodule(B, A, dn,
                 _ragged(doc["N"]["left"], (B.dim, dn, dn), p, f"{path}.N.left"),
                 _ragged(doc["N"]["right"], (dn, A.dim, dn), p, f"{path}.N.right"))
    phi = _ragged(doc["phiMN"], (dm, dn, A.dim), p, f"{path}.phiMN")
    psi = _ragged(doc["psiNM"], (dn, dm, B.dim), p, f"{path}.psiNM")
    return make_gma(MoritaContext(A, B, M, N, phi, psi))


# -- maps ------------------------------------------------------------------------

def linear_to_json(f: LinearMap) -> dict:
    """Column-major: matrix[j] is the image of basis vector j."""
    return {"source_dim": f.source_dim, "target_dim": f.target_dim, "matrix": _tolist(f.matrix.T)}


def linear_from_json(doc: Any, p: int, path: str = "$") -> LinearMap:
    _validate(doc, LINEAR_SCHEMA, path)
    s, t = doc["source_dim"], doc["target_dim"]
    cols = _ragged(doc["matrix"], (s, t), p, f"{path}.matrix")
    return LinearMap(cols.T, p)


def bilinear_to_json(q: BilinearMap) -> dict:
    return {"dim": q.dim, "tensor": _tolist(q.tensor)}


def bilinear_from_json(doc: Any, p: int, path: str = "$") -> BilinearMap:
    _validate(doc, BILINEAR_SCHEMA, path)
    d = doc["dim"]
    return BilinearMap(_array(doc["tensor"], (d, d, d), p, f"{path}.tensor"), p)


def vector_from_json(doc: Any, n: int, p: int, path: str = "$") -> np.ndarray:
    _validate(doc, _VEC, path)
    return _array(doc, (n,), p, path)


def to_jsonable(x: Any) -> Any:
    """Recursively convert numpy values and tuples into plain JSON types."""
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, LinearMap):
        return linear_to_json(x)
    if isinstance(x, BilinearMap):
        return bilinear_to_json(x)
    return x
