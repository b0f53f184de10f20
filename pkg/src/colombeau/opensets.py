"""Finite unions of open intervals of the real line."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import INF


def _endpoint(v):
    if v in (INF, -INF):
        return v
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


@dataclass(frozen=True)
class OpenSet1D:
    """Sorted, pairwise disjoint, nondegenerate open intervals ``(a, b)``."""

    intervals: tuple

    def __init__(self, intervals):
        ivs = sorted((_endpoint(a), _endpoint(b)) for a, b in intervals)
        if not ivs:
            raise ValueError("an open set literal needs at least one interval")
        for a, b in ivs:
            if not a < b:
                raise ValueError(f"degenerate interval ({a}, {b})")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if a1 < b0:
                raise ValueError(f"overlapping intervals near {a1}")
        object.__setattr__(self, "intervals", tuple(ivs))

    @classmethod
    def real_line(cls) -> "OpenSet1D":
        return cls([(-INF, INF)])

    @classmethod
    def parse(cls, text: str) -> "OpenSet1D":
        from .literals import parse_openset

        return parse_openset(text)

    def interval_of(self, x):
        """The interval containing the real ``x``, or None."""
        for a, b in self.intervals:
            if a < x < b:
                return a, b
        return None

    def contains(self, x) -> bool:
        return self.interval_of(x) is not None

    __contains__ = contains

    def contains_segment(self, p, q) -> bool:
        """Does the closed segment between ``p`` and ``q`` lie in one interval?"""
        lo, hi = min(p, q), max(p, q)
        iv = self.interval_of(lo)
        return iv is not None and hi < iv[1]

    def dist_to_complement(self, p, q) -> float:
        """Distance from the segment ``[p, q]`` (assumed inside) to the complement."""
        lo, hi = min(p, q), max(p, q)
        iv = self.interval_of(lo)
        if iv is None or not hi < iv[1]:
            return 0.0
        return float(min(lo - iv[0], iv[1] - hi))

    def __str__(self) -> str:
        from .literals import format_openset

        return format_openset(self)
