"""Two-column ``x,y`` CSV reading and writing.

An optional single header line is allowed, rows may come in any order (they
are sorted on load) and repeated abscissae are rejected.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import MalformedCSVError, TooFewPointsError
from .model import MIN_POINTS, SampledCurve


def _floats(cells):
    return [float(c) for c in cells]


def parse_curve_csv(text: str) -> SampledCurve:
    rows = []
    lines = {}  # x -> source line, for duplicate diagnostics
    reader = csv.reader(io.StringIO(text))
    for lineno, cells in enumerate(reader, start=1):
        cells = [c.strip() for c in cells]
        if not cells or all(c == "" for c in cells):
            continue
        if len(cells) != 2:
            raise MalformedCSVError(f"expected 2 columns, found {len(cells)}", lineno)
        try:
            x, y = _floats(cells)
        except ValueError:
            if not rows and not lines.get("__header__"):
                lines["__header__"] = lineno
                continue
            raise MalformedCSVError(f"non-numeric value in {cells!r}", lineno) from None
        if not (np.isfinite(x) and np.isfinite(y)):
            raise MalformedCSVError("non-finite value", lineno)
        if x in lines:
            raise MalformedCSVError(f"duplicate x={x!r} (first seen on row {lines[x]})", lineno)
        lines[x] = lineno
        rows.append((x, y))
    if len(rows) < MIN_POINTS:
        raise TooFewPointsError(f"need at least {MIN_POINTS} data rows, found {len(rows)}")
    rows.sort()
    data = np.array(rows)
    return SampledCurve(data[:, 0], data[:, 1])


def read_curve_csv(path) -> SampledCurve:
    return parse_curve_csv(Path(path).read_text())


def format_curve_csv(curve: SampledCurve) -> str:
    """Round-trip exact (17 significant digits)."""
    out = ["x,y"]
    out += [f"{x:.17g},{y:.17g}" for x, y in zip(curve.xs.tolist(), curve.ys.tolist())]
    return "\n".join(out) + "\n"


def write_curve_csv(curve: SampledCurve, path) -> None:
    Path(path).write_text(format_curve_csv(curve))
