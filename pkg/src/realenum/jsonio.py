"""JSON output with 17 significant digits for every float.

Non-finite floats become null and complex numbers become [re, im], so the
output is always valid JSON and round-trips doubles exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

__all__ = ["dumps", "normalize"]


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0:
        return "0.0"  # no negative zero
    s = "%.17g" % x
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def normalize(obj: Any) -> Any:
    """Plain Python containers and scalars, numpy types unwrapped."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [normalize(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def _dump(obj: Any, indent: int | None, level: int, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, dict)):
        items = list(obj.items()) if isinstance(obj, dict) else list(obj)
        openc, closec = ("{", "}") if isinstance(obj, dict) else ("[", "]")
        if not items:
            out.append(openc + closec)
            return
        flat = indent is None or all(not isinstance(v, (list, dict)) for v in (obj.values() if isinstance(obj, dict) else obj))
        sep = ", " if flat else ","
        out.append(openc)
        for k, item in enumerate(items):
            if k:
                out.append(sep)
            if not flat:
                out.append("\n" + " " * (indent * (level + 1)))
            if isinstance(obj, dict):
                out.append(json.dumps(item[0]) + ": ")
                item = item[1]
            _dump(item, indent, level + 1, out)
        if not flat:
            out.append("\n" + " " * (indent * level))
        out.append(closec)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int | None = 2) -> str:
    out: list[str] = []
    _dump(normalize(obj), indent, 0, out)
    return "".join(out)
