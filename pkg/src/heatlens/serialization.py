"""Byte-stable text output: decimal floats, canonical JSON, atomic writes.

Every number is written as a decimal with 17 significant digits, enough
to round-trip any float64 exactly, so identical data always produces
identical bytes regardless of platform printing defaults.
"""

from __future__ import annotations

import json
import math
import os
import tempfile


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite number {value!r}")
    return format(float(value), ".17g")


def _render(obj, pieces: list, indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if obj is None:
        pieces.append("null")
    elif isinstance(obj, bool):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, int):
        pieces.append(str(obj))
    elif isinstance(obj, float):
        pieces.append(format_float(obj))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise ValueError(f"object keys must be strings, got {key!r}")
            pieces.append(pad + json.dumps(key) + ": ")
            _render(value, pieces, indent, level + 1)
            pieces.append(",\n" if i + 1 < len(obj) else "\n")
        pieces.append(close_pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, value in enumerate(obj):
            pieces.append(pad)
            _render(value, pieces, indent, level + 1)
            pieces.append(",\n" if i + 1 < len(obj) else "\n")
        pieces.append(close_pad + "]")
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__}")


def dumps_stable(obj, indent: int = 2) -> str:
    """Render to JSON text with deterministic bytes and exact floats."""
    pieces: list = []
    _render(obj, pieces, indent, 0)
    pieces.append("\n")
    return "".join(pieces)


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temporary file and rename, so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def parse_json_file(path: str):
    """Load a JSON document, pointing at the byte where parsing failed."""
    with open(path, "r") as handle:
        text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(
            f"{path} is not valid JSON: {err.msg} at line {err.lineno} column {err.colno}"
        ) from err
