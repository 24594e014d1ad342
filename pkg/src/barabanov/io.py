"""Problem files, canonical report serialization and atomic writes.

A problem file is JSON::

    {"dimension": 2,
     "label": "optional name",
     "matrices": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]}

Each matrix is given row-major, either nested as above or flat
(``[a11, a12, a21, a22]``).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .linalg import MatrixSet


class ProblemFileError(ValueError):
    pass


@dataclass(frozen=True)
class Problem:
    matrix_set: MatrixSet
    label: str = ""


def parse_problem(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    dim = data.get("dimension", 2)
    if dim != 2:
        raise ProblemFileError(f"only dimension 2 is supported, got {dim!r}")
    mats = data.get("matrices")
    if not isinstance(mats, list) or not mats:
        raise ProblemFileError("'matrices' must be a non-empty list")
    label = data.get("label", "")
    if not isinstance(label, str):
        raise ProblemFileError("'label' must be a string")
    try:
        return Problem(MatrixSet(tuple(mats)), label)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(str(exc)) from exc


def load_problem(path: str | os.PathLike) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON: {exc}") from exc
    return parse_problem(data)


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = "%.17g" % x
    # keep floats recognisable as floats after a round trip
    if all(c in "-0123456789" for c in s):
        s += ".0"
    return s


def canonical_dumps(obj, indent: int = 2) -> str:
    """JSON with sorted keys and every float printed to 17 significant digits.

    The output is a fixed point of ``canonical_dumps(json.loads(...))``.
    """

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return format_float(o)
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(o[k], level + 1)}" for k in sorted(o)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if hasattr(o, "item"):
            return enc(o.item(), level)
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
