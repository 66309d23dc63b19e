"""JSON encoding of complex scalars and matrices.

A complex scalar is ``[re, im]``; a matrix is a list of rows of complex
scalars; an empty matrix is ``[]``. Floats are written with 17 significant
digits so that every double survives a round trip.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import ParseError


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_matrix(A) -> list:
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return []
    return [[encode_complex(v) for v in row] for row in A]


def decode_complex(obj: Any, path: str) -> complex:
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    ):
        raise ParseError("expected complex scalar [re, im]", path)
    re, im = float(obj[0]), float(obj[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ParseError("complex scalar must be finite", path)
    return complex(re, im)


def decode_matrix(obj: Any, path: str, shape: tuple[int | None, int | None] = (None, None)) -> np.ndarray:
    """Decode a matrix; ``None`` entries in ``shape`` are unconstrained.

    An empty list decodes to a 0-row matrix whose column count is taken from
    ``shape`` (0 when unconstrained).
    """
    if not isinstance(obj, list):
        raise ParseError("expected matrix (list of rows)", path)
    rows, cols = shape
    if len(obj) == 0:
        if rows not in (None, 0) and cols not in (None, 0):
            raise ParseError(f"empty matrix but expected shape {rows}x{cols}", path)
        if rows not in (None, 0):
            return np.zeros((rows, 0), dtype=complex)
        return np.zeros((0, cols or 0), dtype=complex)
    out = []
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise ParseError("expected row (list of complex scalars)", f"{path}[{i}]")
        vals = [decode_complex(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)]
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ParseError(f"ragged row: length {len(vals)} != {width}", f"{path}[{i}]")
        out.append(vals)
    A = np.array(out, dtype=complex).reshape(len(out), width or 0)
    if rows is not None and A.shape[0] != rows:
        raise ParseError(f"has {A.shape[0]} rows, expected {rows}", path)
    if cols is not None and A.shape[1] != cols:
        raise ParseError(f"has {A.shape[1]} columns, expected {cols}", path)
    return A


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def _emit(obj: Any, indent: int | None, level: int) -> str:
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = f"{obj:.17g}"
        if all(c not in text for c in ".eEn"):
            text += ".0"
        return text
    if isinstance(obj, (list, dict)) and len(obj) > 0:
        # leaf rows of numbers stay on one line
        flat = indent is None or (
            isinstance(obj, list) and all(not isinstance(v, (list, dict)) for v in obj)
        ) or (isinstance(obj, list) and all(
            isinstance(v, list) and all(not isinstance(u, (list, dict)) for u in v) for v in obj
        ))
        if isinstance(obj, list):
            items = [_emit(v, indent, level + 1) for v in obj]
        else:
            items = [f"{json.dumps(k)}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        open_, close = ("[", "]") if isinstance(obj, list) else ("{", "}")
        if flat:
            return open_ + ", ".join(items) + close
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        return open_ + "\n" + ",\n".join(pad + it for it in items) + "\n" + end + close
    return json.dumps(obj)


def dumps(obj: Any, indent: int | None = 2) -> str:
    """Serialize to JSON with 17-significant-digit floats."""
    return _emit(_plain(obj), indent, 0)
