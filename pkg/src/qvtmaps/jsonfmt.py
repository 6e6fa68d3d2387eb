"""Deterministic JSON text with floats written to 17 significant digits."""
from __future__ import annotations

import json
import math


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(obj, 0, indent, out)
    return "".join(out) + "\n"


def _emit(obj, level: int, indent: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        out.append(json.dumps(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot encode non-finite float {obj!r}")
        out.append(format(obj, ".17g") if obj != int(obj) or abs(obj) >= 1e17
                   else format(obj, ".1f"))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _emit(v, level + 1, indent, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, level + 1, indent, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")
