"""Vectorized float Taylor mode over a batch of points.

Used for the series-valued quadrature integrand ``s ↦ f'(X + sH)``: all nodes
of a Gauss–Legendre panel are evaluated at once.  A batch value is a dense
``(m, N)`` array of coefficients at exponents ``lead + i/d`` for
``lead + i/d < tail``, one row per node.  The exact kernel in
:mod:`colombeau.series` is the reference; anything this module does not
handle raises :class:`Unsupported` and the caller falls back to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import expr as E
from .series import INF, EpsSeries


class Unsupported(Exception):
    """The batched kernel cannot evaluate this node; use the exact path."""


@dataclass
class Batch:
    lead: Fraction
    data: np.ndarray  # (m, N)
    tail: Fraction
    d: int

    @property
    def m(self) -> int:
        return self.data.shape[0]

    def column_of(self, e) -> int:
        i = (Fraction(e) - self.lead) * self.d
        if i.denominator != 1:
            raise Unsupported(f"exponent {e} is off the lattice 1/{self.d}")
        return int(i)


def _width(lead, tail, d) -> int:
    return max(0, math.ceil((tail - lead) * d))


def _cap(tail, order):
    return min(tail, order)


def _from_series_rows(rows: list, d: int, order) -> Batch:
    """Stack exact series (one per node) into a batch."""
    tail = _cap(min(r.tail for r in rows), order)
    lead = min((r.terms[0][0] for r in rows if r.terms), default=tail)
    b = Batch(Fraction(lead), np.zeros((len(rows), _width(lead, tail, d))), Fraction(tail), d)
    for i, r in enumerate(rows):
        for e, c in r.terms:
            if e < tail:
                b.data[i, b.column_of(e)] += float(c)
    return b


def _const(c, m, d, order) -> Batch:
    tail = Fraction(order)
    if c == 0:
        return Batch(tail, np.zeros((m, 0)), tail, d)
    data = np.zeros((m, _width(0, tail, d)))
    data[:, 0] = float(c)
    return Batch(Fraction(0), data, tail, d)


def _realign(b: Batch, lead, tail) -> np.ndarray:
    """Coefficients of ``b`` on the window ``[lead, tail)``; columns outside it are dropped."""
    out = np.zeros((b.m, _width(lead, tail, b.d)))
    off = int((b.lead - lead) * b.d)
    src = max(0, -off)
    dst = max(0, off)
    n = min(b.data.shape[1] - src, out.shape[1] - dst)
    if n > 0:
        out[:, dst : dst + n] = b.data[:, src : src + n]
    return out


def _add(a: Batch, b: Batch, sign: float = 1.0) -> Batch:
    tail = min(a.tail, b.tail)
    lead = min(a.lead, b.lead, tail)
    return Batch(lead, _realign(a, lead, tail) + sign * _realign(b, lead, tail), tail, a.d)


def _is_zero(b: Batch) -> bool:
    return b.data.shape[1] == 0 or not np.any(b.data)


def _mul(a: Batch, b: Batch, order) -> Batch:
    if _is_zero(a) and a.tail >= order or _is_zero(b) and b.tail >= order:
        t = Fraction(order)
        return Batch(t, np.zeros((a.m, 0)), t, a.d)
    tail = _cap(min(a.tail + b.lead, b.tail + a.lead), order)
    lead = a.lead + b.lead
    n = _width(lead, tail, a.d)
    out = np.zeros((a.m, n))
    if not (a.data.shape[1] and b.data.shape[1]):
        return Batch(lead, out, tail, a.d)
    for i in range(a.m):
        c = np.convolve(a.data[i], b.data[i])[:n]
        out[i, : len(c)] = c
    return Batch(lead, out, tail, a.d)


def _normalize(b: Batch):
    """``(lead, c0, u)`` with ``b = c0 ε^lead (1 + u)``; every row needs the same leading column."""
    nz = np.flatnonzero(np.any(b.data != 0, axis=0))
    if not len(nz):
        raise Unsupported("leading term hidden")
    j = nz[0]
    c0 = b.data[:, j]
    if np.any(np.abs(c0) <= 1e-300):
        raise Unsupported("leading coefficient vanishes at some node")
    lead = b.lead + Fraction(int(j), b.d)
    u = b.data[:, j:] / c0[:, None]
    return lead, c0, u


def _pow1p(U: np.ndarray, p: float) -> np.ndarray:
    m, n = U.shape
    P = np.zeros((m, n))
    P[:, 0] = 1.0
    k = np.arange(1, n)
    for j in range(1, n):
        kk = k[:j]
        w = p * kk - (j - kk)
        P[:, j] = (U[:, 1 : j + 1] * w * P[:, j - 1 :: -1][:, :j]).sum(axis=1) / j
    return P


def _pow(b: Batch, p: Fraction, order) -> Batch:
    lead, c0, u = _normalize(b)
    if p.denominator != 1 and np.any(c0 < 0):
        raise Unsupported("fractional power of a negative series")
    new_lead = lead * p
    if (new_lead * b.d).denominator != 1:
        raise Unsupported("result leaves the lattice")
    tail = _cap(new_lead + (b.tail - lead), order)
    n = _width(new_lead, tail, b.d)
    U = np.zeros((b.m, n))
    w = min(n, u.shape[1])
    U[:, :w] = u[:, :w]
    P = _pow1p(U, float(p)) * (c0 ** float(p))[:, None]
    return Batch(new_lead, P, tail, b.d)


def _split_standard(b: Batch, order):
    """``(s0, D)``: standard part per row and the infinitesimal part on ``[0, tail)``."""
    nz = np.flatnonzero(np.any(b.data != 0, axis=0))
    if len(nz) and b.lead + Fraction(int(nz[0]), b.d) < 0:
        raise Unsupported("argument is not near-standard")
    if b.tail <= 0:
        raise Unsupported("standard part hidden behind the tail")
    tail = _cap(b.tail, order)
    D = _realign(b, Fraction(0), tail)
    s0 = D[:, 0].copy() if D.shape[1] else np.zeros(b.m)
    if D.shape[1]:
        D[:, 0] = 0.0
    return s0, D, tail


def _rec_exp(D):
    m, n = D.shape
    out = np.zeros((m, n))
    out[:, 0] = 1.0
    kD = D * np.arange(n)
    for j in range(1, n):
        out[:, j] = (kD[:, 1 : j + 1] * out[:, j - 1 :: -1][:, :j]).sum(axis=1) / j
    return out


def _rec_sincos(D):
    m, n = D.shape
    S, C = np.zeros((m, n)), np.zeros((m, n))
    C[:, 0] = 1.0
    kD = D * np.arange(n)
    for j in range(1, n):
        S[:, j] = (kD[:, 1 : j + 1] * C[:, j - 1 :: -1][:, :j]).sum(axis=1) / j
        C[:, j] = -(kD[:, 1 : j + 1] * S[:, j - 1 :: -1][:, :j]).sum(axis=1) / j
    return S, C


def _rec_log1p(W):
    m, n = W.shape
    L = np.zeros((m, n))
    k = np.arange(n)
    for j in range(1, n):
        acc = (k[1:j] * L[:, 1:j] * W[:, j - 1 : 0 : -1]).sum(axis=1) if j > 1 else 0.0
        L[:, j] = W[:, j] - acc / j
    return L


def _smooth(name: str, b: Batch, order) -> Batch:
    s0, D, tail = _split_standard(b, order)
    if name == "exp":
        out = _rec_exp(D) * np.exp(s0)[:, None]
    elif name in ("sin", "cos"):
        S, C = _rec_sincos(D)
        sn, cs = np.sin(s0)[:, None], np.cos(s0)[:, None]
        out = sn * C + cs * S if name == "sin" else cs * C - sn * S
    elif name == "log":
        if np.any(s0 <= 0):
            raise Unsupported("log of a non-positive standard part")
        out = _rec_log1p(D / s0[:, None])
        out[:, 0] = np.log(s0)
    else:
        raise Unsupported(name)
    return Batch(Fraction(0), out, tail, b.d)


def evaluate(e: E.Expr, xs: Batch, order, memo=None) -> Batch:
    """Batched Taylor-mode value of ``e`` with ``x`` bound to ``xs``."""
    memo = {} if memo is None else memo
    key = id(e)
    if key in memo:
        return memo[key][1]
    m, d = xs.m, xs.d
    if isinstance(e, E.Const):
        out = _const(e.value, m, d, order)
    elif isinstance(e, E.Var):
        if e.name == "x":
            out = xs
        elif e.name == "eps":
            out = _from_series_rows([EpsSeries.monomial(1, 1)] * m, d, order)
        else:
            raise Unsupported(e.name)
    elif isinstance(e, E.Neg):
        a = evaluate(e.arg, xs, order, memo)
        out = Batch(a.lead, -a.data, a.tail, d)
    elif isinstance(e, (E.Add, E.Sub, E.Mul, E.Div)):
        a = evaluate(e.left, xs, order, memo)
        b = evaluate(e.right, xs, order, memo)
        if isinstance(e, E.Add):
            out = _add(a, b)
        elif isinstance(e, E.Sub):
            out = _add(a, b, -1.0)
        elif isinstance(e, E.Mul):
            out = _mul(a, b, order)
        else:
            out = _mul(a, _pow(b, Fraction(-1), order), order)
    elif isinstance(e, E.Pow):
        b = evaluate(e.base, xs, order, memo)
        p = e.exponent
        if p.denominator == 1 and 0 <= p <= 4:
            out = _const(1, m, d, order)
            for _ in range(int(p)):
                out = _mul(out, b, order)
        else:
            out = _pow(b, p, order)
    elif isinstance(e, E.Func):
        a = evaluate(e.arg, xs, order, memo)
        out = _pow(a, Fraction(1, 2), order) if e.name == "sqrt" else _smooth(e.name, a, order)
    else:
        raise Unsupported(type(e).__name__)
    if not np.all(np.isfinite(out.data)):
        raise Unsupported("overflow")
    memo[key] = (e, out)
    return out


def lattice_of(series_list) -> int:
    """Common denominator of every exponent and tail in the given exact series."""
    d = 1
    for s in series_list:
        for e, _ in s.terms:
            d = math.lcm(d, Fraction(e).denominator)
        if s.tail != INF:
            d = math.lcm(d, Fraction(s.tail).denominator)
    return d


def line_batch(xb: EpsSeries, hb: EpsSeries, nodes: np.ndarray, d: int, order) -> Batch:
    """Rows ``xb + s·hb`` for ``s`` in ``nodes``."""
    tail = _cap(min(xb.tail, hb.tail), order)
    exps = [e for e, _ in xb.terms + hb.terms if e < tail]
    lead = Fraction(min(exps, default=tail))
    b = Batch(lead, np.zeros((len(nodes), _width(lead, tail, d))), Fraction(tail), d)
    for e, c in xb.terms:
        if e < tail:
            b.data[:, b.column_of(e)] += float(c)
    for e, c in hb.terms:
        if e < tail:
            b.data[:, b.column_of(e)] += float(c) * nodes
    return b


def to_dicts(b: Batch, cutoff) -> list:
    """Per-row ``{exponent: coefficient}`` below ``cutoff``."""
    exps = [b.lead + Fraction(i, b.d) for i in range(b.data.shape[1])]
    keep = [i for i, e in enumerate(exps) if e < cutoff]
    return [{exps[i]: row[i] for i in keep} for row in b.data]
