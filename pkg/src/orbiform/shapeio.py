"""Shape-JSON files: strict readers, deterministic writers.

Schema: { "dim": 2|3, "width": number, "coeffs": [entry, ...] } with entries
{ "degree": int, "part": "cos"|"sin", "value": number } for dim 2 and
{ "degree": int, "order": int, "value": number } for dim 3. Unknown fields are
rejected at both levels. Entries may arrive in any order; writers emit them in
increasing degree and skip exact zeros. Coefficient values are inner products
against the orthonormal harmonic basis.

For dim 2 the coefficients describe the support function of a body; for dim 3
they describe a curvature-sum deviation candidate.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .harmonic_core import SpectralCoeffs, index2, index3, num_coeffs

__all__ = [
    "ShapeFormatError",
    "coeffs_to_entries",
    "entries_to_coeffs",
    "dumps_shape",
    "loads_shape",
    "write_text_atomic",
]


class ShapeFormatError(ValueError):
    """Shape JSON that does not conform to the schema."""


def coeffs_to_entries(coeffs: SpectralCoeffs) -> list[dict]:
    entries: list[dict] = []
    if coeffs.dim == 2:
        for degree in range(coeffs.max_degree + 1):
            for part in ("cos", "sin"):
                if degree == 0 and part == "sin":
                    continue
                v = coeffs.values[index2(degree, part)]
                if v != 0.0:
                    entries.append({"degree": degree, "part": part, "value": float(v)})
    else:
        for degree in range(coeffs.max_degree + 1):
            for order in range(-degree, degree + 1):
                v = coeffs.values[index3(degree, order)]
                if v != 0.0:
                    entries.append({"degree": degree, "order": order, "value": float(v)})
    return entries


def _fail(msg: str) -> None:
    raise ShapeFormatError(msg)


def _check_value(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        _fail(f"coefficient value must be a finite number, got {v!r}")
    return float(v)


def _check_degree(d) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 0:
        _fail(f"degree must be a non-negative integer, got {d!r}")
    return d


def entries_to_coeffs(dim: int, entries) -> SpectralCoeffs:
    if not isinstance(entries, list):
        _fail("coeffs must be a list")
    max_degree = 0
    parsed: list[tuple[int, object, float]] = []
    for e in entries:
        if not isinstance(e, dict):
            _fail("each coefficient entry must be an object")
        if dim == 2:
            if set(e.keys()) != {"degree", "part", "value"}:
                _fail(f"dim-2 entry keys must be degree/part/value, got {sorted(e.keys())}")
            degree = _check_degree(e["degree"])
            part = e["part"]
            if part not in ("cos", "sin"):
                _fail(f"part must be 'cos' or 'sin', got {part!r}")
            if degree == 0 and part == "sin":
                _fail("degree 0 has no sin part")
            key = part
        else:
            if set(e.keys()) != {"degree", "order", "value"}:
                _fail(f"dim-3 entry keys must be degree/order/value, got {sorted(e.keys())}")
            degree = _check_degree(e["degree"])
            order = e["order"]
            if isinstance(order, bool) or not isinstance(order, int) or abs(order) > degree:
                _fail(f"order must be an integer with |order| <= degree, got {order!r}")
            key = order
        value = _check_value(e["value"])
        parsed.append((degree, key, value))
        max_degree = max(max_degree, degree)

    if max_degree > 4096:
        _fail(f"degree {max_degree} is unreasonably large")
    values = np.zeros(num_coeffs(dim, max_degree))
    seen: set[tuple[int, object]] = set()
    for degree, key, value in parsed:
        if (degree, key) in seen:
            _fail(f"duplicate coefficient entry (degree={degree}, {key!r})")
        seen.add((degree, key))
        idx = index2(degree, key) if dim == 2 else index3(degree, key)
        values[idx] = value
    return SpectralCoeffs(dim, max_degree, values)


def dumps_shape(dim: int, width: float, coeffs: SpectralCoeffs) -> str:
    payload = {"dim": dim, "width": float(width), "coeffs": coeffs_to_entries(coeffs)}
    return json.dumps(payload, indent=2) + "\n"


def loads_shape(text: str) -> tuple[int, float, SpectralCoeffs]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        _fail("top level must be an object")
    if set(data.keys()) != {"dim", "width", "coeffs"}:
        _fail(f"top-level keys must be dim/width/coeffs, got {sorted(data.keys())}")
    dim = data["dim"]
    if dim not in (2, 3):
        _fail(f"dim must be 2 or 3, got {dim!r}")
    width = data["width"]
    if isinstance(width, bool) or not isinstance(width, (int, float)) or not np.isfinite(width) or width <= 0:
        _fail(f"width must be a finite number > 0, got {width!r}")
    return dim, float(width), entries_to_coeffs(dim, data["coeffs"])


def write_text_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
