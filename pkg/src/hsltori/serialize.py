"""Deterministic text serialization helpers.

CSV and JSON emitted by the tools must be byte-identical across runs, so all
floats go through a fixed 17-significant-digit formatter and JSON is written
by a small emitter with insertion-ordered keys.
"""

from __future__ import annotations

from typing import Any


def format_float(value: float) -> str:
    """Fixed 17-significant-digit decimal form; round-trips doubles exactly."""
    return format(float(value), ".17g")


def _emit(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad_in + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad_in + f'"{k}": ' + _emit(v, indent, level + 1)
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj: Any, indent: int = 2) -> str:
    return _emit(obj, indent, 0) + "\n"


def write_json(obj: Any, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_json(obj))


def complex_pair(z: complex) -> list[float]:
    """JSON form [re, im] of a complex number."""
    z = complex(z)
    return [z.real, z.imag]
