"""JSON encodings for matrices, operators and contexts.

Matrix:   {"dim": n, "re": [[...]], "im": [[...]]}   ("im" optional)
Context:  {"atoms": [matrix, ...]}
          or {"basis": [[complex vector], ...], "blocks": [sizes]}
Complex vector entries may be numbers, [re, im] pairs, or {"re": x, "im": y}.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import InputError
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance
from .projlat import AbelianContext


def _real_grid(rows: Any, n: int, name: str) -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"'{name}' must be an n x n array of numbers") from exc
    if arr.shape != (n, n):
        raise InputError(f"'{name}' has shape {arr.shape}, expected ({n}, {n})")
    return arr


def matrix_from_json(obj: Any) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise InputError("matrix JSON must be an object with at least 're'")
    re_rows = obj["re"]
    n = obj.get("dim", len(re_rows) if isinstance(re_rows, list) else 0)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"invalid 'dim': {n!r}")
    re = _real_grid(re_rows, n, "re")
    im = _real_grid(obj["im"], n, "im") if obj.get("im") is not None else np.zeros((n, n))
    return re + 1j * im


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    out = {"dim": int(m.shape[0]), "re": _clean(m.real).tolist()}
    if np.any(m.imag != 0):
        out["im"] = _clean(m.imag).tolist()
    return out


def _clean(a: np.ndarray) -> np.ndarray:
    # negative zeros print as "-0.0", which breaks byte-identical golden files
    a = np.array(a, dtype=float)
    a[a == 0] = 0.0
    return a


def operator_from_json(obj: Any, tol: Tolerance = DEFAULT_TOL) -> HermitianOperator:
    return HermitianOperator(matrix_from_json(obj), tol)


def _complex_entry(x: Any) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, dict) and "re" in x:
        return complex(float(x["re"]), float(x.get("im", 0.0)))
    raise InputError(f"not a complex number: {x!r}")


def context_from_json(obj: Any, tol: Tolerance = DEFAULT_TOL) -> AbelianContext:
    if not isinstance(obj, dict):
        raise InputError("context JSON must be an object")
    if "atoms" in obj:
        atoms = [Projection.from_matrix(matrix_from_json(a), tol) for a in obj["atoms"]]
        return AbelianContext(atoms, tol)
    if "basis" in obj and "blocks" in obj:
        vectors = [[_complex_entry(x) for x in vec] for vec in obj["basis"]]
        basis = np.array(vectors, dtype=complex).T
        blocks = [int(b) for b in obj["blocks"]]
        return AbelianContext.from_blocks(basis, blocks, tol)
    raise InputError("context JSON needs 'atoms' or 'basis' + 'blocks'")


def context_to_json(ctx: AbelianContext) -> dict:
    return {"atoms": [matrix_to_json(a.matrix) for a in ctx.atoms]}


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
