"""CSV and JSON serialization.

Floats are written with Python's shortest round-trip representation so that
identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .coefficients import JacobiSequence, VerblunskySequence, parse_complex
from .errors import InvalidParameterError
from .hessenberg import HessenbergTruncation
from .polynomials import circle_grid, eval_monic, ratio_table

__all__ = [
    "fmt",
    "write_csv",
    "write_json",
    "config_hash",
    "sequence_rows",
    "truncation_rows",
    "zero_rows",
    "batch_request_rows",
]


def fmt(x) -> str:
    """Shortest round-trip decimal for floats; ints and strings pass through."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, data) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    return path


def config_hash(config: dict) -> str:
    canonical = json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def sequence_rows(seq, n: int):
    """``(n, re, im)`` rows for Verblunsky data, ``(n, a, b)`` for Jacobi data."""
    if isinstance(seq, VerblunskySequence):
        return ("n", "re", "im"), [(k, v.real, v.imag) for k, v in enumerate(seq.take(n))]
    if isinstance(seq, JacobiSequence):
        a, b = seq.take(n)
        return ("n", "a", "b"), [(k + 1, x, y) for k, (x, y) in enumerate(zip(a, b))]
    raise InvalidParameterError(f"not a coefficient sequence: {seq!r}")


def truncation_rows(trunc: HessenbergTruncation):
    """Nonzero entries as ``(i, j, re, im)`` with 1-based indices."""
    M = trunc.entries
    rows = []
    for i, j in zip(*np.nonzero(M)):
        v = complex(M[i, j])
        rows.append((int(i) + 1, int(j) + 1, v.real, v.imag))
    return ("i", "j", "re", "im"), rows


def zero_rows(zs):
    return ("n", "index", "re", "im"), [(zs.degree, k, z.real, z.imag) for k, z in enumerate(zs.zeros)]


def _z_grid(spec: dict) -> np.ndarray:
    kind = spec.get("kind", "circle")
    if kind == "circle":
        return circle_grid(float(spec["radius"]), int(spec.get("points", 64)))
    if kind == "points":
        return np.array([parse_complex(v) for v in spec["values"]])
    raise InvalidParameterError(f"unknown z-grid kind {kind!r}")


def _n_range(spec) -> list[int]:
    if isinstance(spec, dict):
        return list(range(int(spec["start"]), int(spec["stop"]) + 1, int(spec.get("step", 1))))
    if isinstance(spec, (list, tuple)) and len(spec) == 2 and all(isinstance(v, int) for v in spec):
        return list(range(spec[0], spec[1] + 1))
    raise InvalidParameterError("n-range must be {start, stop[, step]} or [start, stop]")


_REQUEST_KEYS = {"n", "z", "quantity", "normalized"}


def batch_request_rows(trunc: HessenbergTruncation, request: dict):
    """Evaluate a batch request ``{"n": .., "z": .., "quantity": .., "normalized": ..}``.

    ``quantity`` is ``"ratio"`` (default) or ``"monic"``.  Returns the CSV
    header ``(n, re z, im z, re value, im value)`` and rows.
    """
    unknown = set(request) - _REQUEST_KEYS
    if unknown:
        raise InvalidParameterError(f"unknown keys in batch request: {sorted(unknown)}")
    ns = _n_range(request["n"])
    z = _z_grid(request["z"])
    quantity = request.get("quantity", "ratio")
    header = ("n", "re_z", "im_z", "re_value", "im_value")
    rows = []
    if quantity == "ratio":
        if min(ns) < 1:
            raise InvalidParameterError("ratios need n >= 1")
        table = ratio_table(trunc, max(ns), z, normalized=bool(request.get("normalized", False)))
        for n in ns:
            rows.extend((n, zz.real, zz.imag, v.real, v.imag) for zz, v in zip(z, table[n - 1]))
    elif quantity == "monic":
        for n in ns:
            vals = np.atleast_1d(eval_monic(trunc, n, z))
            rows.extend((n, zz.real, zz.imag, v.real, v.imag) for zz, v in zip(z, vals))
    else:
        raise InvalidParameterError(f"unknown quantity {quantity!r}")
    return header, rows
