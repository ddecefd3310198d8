"""Matrix and instance files.

A matrix is stored as ``{"rows": m, "cols": n, "entries": [[re, im], ...]}``
with entries in column-major order, so ``entries`` lists ``vec(X)``.  An
instance file is a JSON object with matrix blocks ``"A"``, ``"B"``, ``"C"``.
"""

import json
import math

import numpy as np

from .commutator import TripleInstance
from .linalg import ShapeError


class MalformedInputError(ValueError):
    """An instance or matrix file could not be decoded."""


def matrix_to_dict(x):
    x = np.asarray(x, dtype=np.complex128)
    flat = x.reshape(-1, order="F")
    return {
        "rows": int(x.shape[0]),
        "cols": int(x.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(d, name="matrix"):
    try:
        rows, cols, entries = d["rows"], d["cols"], d["entries"]
    except (KeyError, TypeError):
        raise MalformedInputError(f"{name}: need 'rows', 'cols' and 'entries'") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise MalformedInputError(f"{name}: rows and cols must be positive integers")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise MalformedInputError(f"{name}: expected {rows * cols} entries")
    vals = []
    for k, pair in enumerate(entries):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise MalformedInputError(f"{name}: entry {k} is not a [re, im] pair")
        re_, im_ = pair
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair):
            raise MalformedInputError(f"{name}: entry {k} is not numeric")
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise MalformedInputError(f"{name}: entry {k} is not finite")
        vals.append(complex(re_, im_))
    return np.array(vals, dtype=np.complex128).reshape(rows, cols, order="F")


def instance_to_dict(t):
    m, n = t.shape
    return {
        "provenance": t.provenance,
        "shape": [m, n],
        "A": matrix_to_dict(t.a),
        "B": matrix_to_dict(t.b),
        "C": matrix_to_dict(t.c),
    }


def instance_from_dict(d, provenance="file"):
    if not isinstance(d, dict):
        raise MalformedInputError("instance must be a JSON object")
    mats = {}
    for key in ("A", "B", "C"):
        if key not in d:
            raise MalformedInputError(f"missing matrix block {key!r}")
        mats[key] = matrix_from_dict(d[key], key)
    try:
        return TripleInstance(mats["A"], mats["B"], mats["C"], d.get("provenance", provenance))
    except ShapeError as exc:
        raise MalformedInputError(str(exc)) from None


def read_instance(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON ({exc})") from None
    return instance_from_dict(data, provenance=f"file:{path}")


def write_instance(path, t):
    with open(path, "w") as fh:
        json.dump(instance_to_dict(t), fh, indent=1)
        fh.write("\n")
