"""Deterministic report serialization.

JSON output uses a fixed float format (17 significant digits), preserves
key insertion order, and contains no timestamps or environment data, so a
rerun with the same seed is byte-identical.
"""

import json
import math

import numpy as np


def _float_repr(v: float) -> str:
    if math.isfinite(v):
        return "%.17g" % v
    # Non-finite values are not valid JSON numbers; keep them loud but
    # parseable rather than crashing report emission.
    if math.isnan(v):
        return '"nan"'
    return '"inf"' if v > 0 else '"-inf"'


def _emit(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float_repr(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), out)
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            if not isinstance(k, str):
                k = str(k)
            out.append(json.dumps(k))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")


def dumps(obj) -> str:
    out: list = []
    _emit(obj, out)
    return "".join(out)


def points_to_csv(points) -> str:
    """Rows of 5 coordinates under the header x,y,z,t,s (17 sig digits, LF)."""
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        return "x,y,z,t,s\n"
    if P.ndim == 1:
        P = P.reshape(1, -1)
    if P.shape[-1] != 5:
        raise ValueError("points must have 5 coordinates")
    lines = ["x,y,z,t,s"]
    for row in P:
        lines.append(",".join("%.17g" % v for v in row))
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
