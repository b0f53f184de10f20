"""Tabular verdict reports with JSON and CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonable(v: Any):
    """Convert library values to plain JSON types (exact values become strings)."""
    from .gennum import DistInterval, GenNum

    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, DistInterval):
        return [v.lo, v.hi]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, GenNum):
        return str(v)
    return str(v)


def _cell(v) -> str:
    v = jsonable(v)
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    if isinstance(v, list):
        return "[" + ";".join(_cell(x) for x in v) + "]"
    return str(v)


@dataclass
class VerdictReport:
    """Rows of a check plus a summary; ``passed`` is None for pure measurements."""

    title: str
    columns: tuple
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    passed: bool | None = None

    def add(self, **row):
        self.rows.append(row)

    def column(self, name: str) -> list:
        return [r.get(name) for r in self.rows]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "rows": [{c: jsonable(r.get(c)) for c in self.columns} for r in self.rows],
            "summary": jsonable(self.summary),
            "passed": self.passed,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(r.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_plain(self) -> str:
        lines = [self.title, "  ".join(self.columns)]
        for r in self.rows:
            lines.append("  ".join(_cell(r.get(c)) for c in self.columns))
        for k, v in self.summary.items():
            lines.append(f"{k}: {_cell(v)}")
        if self.passed is not None:
            lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)
