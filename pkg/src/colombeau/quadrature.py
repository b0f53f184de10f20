"""Adaptive Gauss–Legendre quadrature for scalar and coefficient-vector integrands.

The integrand returns a mapping ``key -> float`` (a scalar integrand uses a
single key).  A panel is accepted when its one-panel estimate and the sum of
its two half-panel estimates agree, key by key, within
``tol * max(1, ∫|g|)``: scaling by the integral of the magnitude rather than
by the (possibly cancelling) value keeps the test above rounding noise.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from .errors import NumericError

DEFAULT_NODES = 20


@lru_cache(maxsize=None)
def _rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return tuple(x.tolist()), tuple(w.tolist())


def _panel(fn, a: float, b: float, n: int, batched: bool = False) -> tuple[dict, dict]:
    """GL estimates of ``∫ g`` and ``∫ |g|`` for every key."""
    xs, ws = _rule(n)
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    if batched:
        values = fn(mid + half * np.asarray(xs))
    else:
        values = [fn(mid + half * x) for x in xs]
    acc: dict = {}
    mag: dict = {}
    for vals, w in zip(values, ws):
        for key, val in vals.items():
            v = w * half * float(val)
            acc[key] = acc.get(key, 0.0) + v
            mag[key] = mag.get(key, 0.0) + abs(v)
    return acc, mag


def _combine(p: dict, q: dict) -> dict:
    out = dict(p)
    for key, val in q.items():
        out[key] = out.get(key, 0.0) + val
    return out


def _converged(coarse: dict, fine: dict, mag: dict, tol: float) -> bool:
    for key in set(coarse) | set(fine):
        c, f = coarse.get(key, 0.0), fine.get(key, 0.0)
        if not (math.isfinite(c) and math.isfinite(f)):
            return False
        if abs(c - f) > tol * max(1.0, mag.get(key, 0.0)):
            return False
    return True


def integrate(
    fn: Callable[[float], Mapping],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 30,
    nodes: int = DEFAULT_NODES,
    batched: bool = False,
) -> dict:
    """``∫_a^b fn(s) ds`` for a mapping-valued ``fn``; raises NumericError past ``max_depth``.

    With ``batched=True``, ``fn`` takes an array of nodes and returns one
    mapping per node.
    """

    def recurse(lo, hi, whole, depth):
        mid = 0.5 * (lo + hi)
        left, right = _panel(fn, lo, mid, nodes, batched), _panel(fn, mid, hi, nodes, batched)
        fine = _combine(left[0], right[0])
        if _converged(whole[0], fine, _combine(left[1], right[1]), tol):
            return fine
        if depth >= max_depth:
            raise NumericError(f"quadrature did not converge on [{lo}, {hi}] at depth {depth}")
        return _combine(recurse(lo, mid, left, depth + 1), recurse(mid, hi, right, depth + 1))

    return recurse(a, b, _panel(fn, a, b, nodes, batched), 1)


def integrate_array(
    fn: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 30,
    nodes: int = DEFAULT_NODES,
) -> np.ndarray:
    """Vector-valued variant of :func:`integrate`: ``fn`` maps an array of ``m``
    nodes to an ``(m, K)`` array, and the result has length ``K``."""
    xs, ws = _rule(nodes)
    xs, ws = np.asarray(xs), np.asarray(ws)

    def panel(lo, hi):
        half, mid = 0.5 * (hi - lo), 0.5 * (lo + hi)
        vals = np.asarray(fn(mid + half * xs), dtype=float)
        w = ws * half
        return w @ vals, w @ np.abs(vals)

    def recurse(lo, hi, whole, depth):
        mid = 0.5 * (lo + hi)
        left, right = panel(lo, mid), panel(mid, hi)
        fine = left[0] + right[0]
        mag = left[1] + right[1]
        gap = np.abs(whole[0] - fine)
        if np.all(np.isfinite(fine)) and np.all(gap <= tol * np.maximum(1.0, mag)):
            return fine
        if depth >= max_depth:
            raise NumericError(f"quadrature did not converge on [{lo}, {hi}] at depth {depth}")
        return recurse(lo, mid, left, depth + 1) + recurse(mid, hi, right, depth + 1)

    return recurse(a, b, panel(a, b), 1)


def integrate_scalar(fn: Callable[[float], float], a: float, b: float, **kw) -> float:
    return integrate(lambda s: {0: fn(s)}, a, b, **kw).get(0, 0.0)
