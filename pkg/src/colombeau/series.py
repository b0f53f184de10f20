"""Finite ε-power series with rational exponents and an unknown tail.

An :class:`EpsSeries` stores ``Σ c_i ε^{e_i} + O(ε^T)``: finitely many known
terms with exact rational exponents, plus a tail exponent ``T`` beyond which
nothing is known (``T = inf`` means the series is exact).  Coefficients are
either :class:`fractions.Fraction` (kept exact as long as the arithmetic stays
rational) or ``float``.

Elementary functions of a series are computed in Taylor mode: the exponents
are mapped onto the lattice ``(1/d)ℕ`` and the classical power-series
recurrences (``E' = δ'E`` for exp and so on) are run on the dense coefficient
array.  The recurrences only loop over the nonzero input coefficients, so a
sparse argument such as ``3 + ε^{1/2}`` costs O(N) per function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

from .errors import DomainError, NotInvertible, Undecided, UnknownSign

INF = math.inf
Coeff = Union[Fraction, float]
Exponent = Union[Fraction, float]  # float only for the sentinel INF

CANCEL_TOL = 1e-12
_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_coeff(c) -> Coeff:
    """Normalize a user-supplied coefficient to ``Fraction`` or ``float``."""
    if type(c) is Fraction:
        return c
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    c = float(c)
    if not math.isfinite(c):
        raise DomainError(f"coefficient must be finite, got {c}")
    return c


def as_exponent(e) -> Exponent:
    if type(e) is Fraction:
        return e
    if e == INF:
        return INF
    if isinstance(e, float):
        return Fraction(repr(e))  # decimal reading: 0.7 -> 7/10
    return Fraction(e)


def merge_terms(pairs: Iterable, below: Exponent = INF, tol: float = CANCEL_TOL) -> tuple:
    """Sum coefficients of equal exponents, drop zeros and exponents >= ``below``.

    A float sum is treated as zero when it cancels to within ``tol`` of the
    largest summand; exact sums are zero only when exactly zero.
    """
    bounded = below != INF
    acc: dict = {}
    scale: dict = {}  # largest summand, only for exponents hit more than once
    for e, c in pairs:
        if not c or (bounded and e >= below):
            continue
        key = (e.numerator, e.denominator)  # hashing Fractions directly is slow
        slot = acc.get(key)
        if slot is None:
            acc[key] = [e, c]
        else:
            scale[key] = max(scale.get(key, abs(slot[1])), abs(c))
            slot[1] += c
    out = []
    for key, (e, s) in acc.items():
        if not s:
            continue
        if key in scale and isinstance(s, float) and abs(s) <= tol * scale[key]:
            continue
        out.append((e, s))
    out.sort(key=_exp_key)
    return tuple(out)


def _exp_key(t):
    return t[0]


def coeff_close(a: Coeff, b: Coeff, tol: float = CANCEL_TOL) -> bool:
    if a == b:
        return True
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class EpsSeries:
    """``Σ c ε^e + O(ε^tail)``; build through :meth:`make` to get canonical terms."""

    terms: tuple = ()
    tail: Exponent = INF

    @classmethod
    def make(cls, pairs: Iterable = (), tail=INF) -> "EpsSeries":
        tail = as_exponent(tail)
        norm = ((as_exponent(e), as_coeff(c)) for e, c in pairs)
        return cls(merge_terms(norm, below=tail), tail)

    @classmethod
    def const(cls, c) -> "EpsSeries":
        return cls.make([(0, c)])

    @classmethod
    def monomial(cls, c, e) -> "EpsSeries":
        return cls.make([(e, c)])

    @classmethod
    def unknown(cls, tail) -> "EpsSeries":
        """``O(ε^tail)``: no known terms at all."""
        return cls((), as_exponent(tail))

    # -- inspection -------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.tail == INF

    @property
    def is_zero(self) -> bool:
        """Exactly zero (no terms and no unknown tail)."""
        return not self.terms and self.tail == INF

    @property
    def lead(self):
        """``(exponent, coefficient)`` of the leading known term, or None."""
        return self.terms[0] if self.terms else None

    @property
    def lead_bound(self) -> Exponent:
        """Lower bound on the valuation: leading exponent, else the tail."""
        return self.terms[0][0] if self.terms else self.tail

    def coefficient(self, e) -> Coeff:
        e = Fraction(e)
        for ee, c in self.terms:
            if ee == e:
                return c
        if e >= self.tail:
            raise Undecided(f"coefficient of eps^{e} lies beyond the tail", self.tail)
        return _ZERO

    def sign(self) -> int:
        """Sign of the eventual value: sign of the leading coefficient."""
        if self.terms:
            return 1 if self.terms[0][1] > 0 else -1
        if self.tail == INF:
            return 0
        raise UnknownSign("leading sign hidden behind the tail", self.tail)

    def max_abs_coeff(self) -> float:
        return max((abs(float(c)) for _, c in self.terms), default=0.0)

    def evaluate(self, eps0: float) -> float:
        """Value of the known part at a concrete ``ε``."""
        return math.fsum(float(c) * eps0 ** float(e) for e, c in self.terms)

    def close_to(self, other: "EpsSeries", tol: float = CANCEL_TOL) -> bool:
        """Same tail and coefficientwise equal within ``tol``."""
        if self.tail != other.tail:
            return False
        if self.terms == other.terms:
            return True
        if all(type(c) is Fraction for _, c in self.terms + other.terms):
            return False  # canonical exact terms: any difference is real
        a, b = dict(self.terms), dict(other.terms)
        return all(coeff_close(a.get(e, 0), b.get(e, 0), tol) for e in set(a) | set(b))

    def agrees_with(self, other: "EpsSeries", tol: float = CANCEL_TOL) -> bool:
        """Known coefficients agree below the smaller of the two tails."""
        t = min(self.tail, other.tail)
        a, b = dict(self.terms), dict(other.terms)
        return all(coeff_close(a.get(e, 0), b.get(e, 0), tol) for e in set(a) | set(b) if e < t)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> "EpsSeries":
        return EpsSeries(tuple((e, -c) for e, c in self.terms), self.tail)

    def __add__(self, other) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            other = EpsSeries.const(other)
        tail = min(self.tail, other.tail)
        return EpsSeries(merge_terms(self.terms + other.terms, below=tail), tail)

    __radd__ = __add__

    def __sub__(self, other) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            other = EpsSeries.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "EpsSeries":
        return (-self) + other

    def scale(self, c) -> "EpsSeries":
        c = as_coeff(c)
        if c == 0:
            return EpsSeries()
        return EpsSeries(merge_terms(((e, c * v) for e, v in self.terms), self.tail), self.tail)

    def shift(self, e) -> "EpsSeries":
        """Multiply by ``ε^e``."""
        e = Fraction(e)
        return EpsSeries(tuple((x + e, c) for x, c in self.terms), self.tail + e)

    def __mul__(self, other) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return EpsSeries()
        tail = min(self.tail + other.lead_bound, other.tail + self.lead_bound)
        # exponent arithmetic on the common lattice 1/D with plain ints
        D = 1
        for e, _ in self.terms + other.terms:
            D = math.lcm(D, e.denominator)
        if tail != INF:
            D = math.lcm(D, tail.denominator)
            limit = int(tail * D)
        a = [(e.numerator * (D // e.denominator), c) for e, c in self.terms]
        b = [(e.numerator * (D // e.denominator), c) for e, c in other.terms]
        acc: dict = {}
        scale: dict = {}
        for na, ca in a:
            for nb, cb in b:
                n = na + nb
                if tail != INF and n >= limit:
                    break
                v = ca * cb
                if n in acc:
                    prev = acc[n]
                    scale[n] = max(scale.get(n, abs(prev)), abs(v))
                    acc[n] = prev + v
                else:
                    acc[n] = v
        out = []
        for n in sorted(acc):
            v = acc[n]
            if not v or (n in scale and isinstance(v, float) and abs(v) <= CANCEL_TOL * scale[n]):
                continue
            out.append((Fraction(n, D), v))
        return EpsSeries(tuple(out), tail)

    __rmul__ = __mul__

    def truncate(self, order) -> "EpsSeries":
        """Drop terms at exponents >= ``order``; the tail moves down only if something was dropped."""
        if not self.terms or self.terms[-1][0] < order:
            return self
        kept = tuple(t for t in self.terms if t[0] < order)
        return EpsSeries(kept, min(self.tail, Fraction(order)))

    def __str__(self) -> str:
        from .literals import format_series

        return format_series(self, "eps")


ZERO = EpsSeries()
ONE = EpsSeries.const(1)


# -- Taylor-mode kernel ------------------------------------------------------


def _lattice(exponents) -> int:
    d = 1
    for e in exponents:
        d = math.lcm(d, Fraction(e).denominator)
    return d


def _dense(terms, d: int, n: int) -> tuple[list, list]:
    dense = [_ZERO] * n
    for e, c in terms:
        idx = e * d
        assert idx.denominator == 1
        idx = int(idx)
        if idx < n:
            dense[idx] = c
    nz = [k for k in range(1, n) if dense[k] != 0]
    return dense, nz


def _sparse(dense, d: int, scale=_ONE, shift=_ZERO) -> list:
    return [(shift + Fraction(n, d), scale * c) for n, c in enumerate(dense) if c != 0]


def _npoints(rel_tail, d: int) -> int:
    return max(1, math.ceil(rel_tail * d))


def _exp_rec(D, nz, n_pts):
    E = [_ZERO] * n_pts
    E[0] = _ONE
    for n in range(1, n_pts):
        acc = _ZERO
        for k in nz:
            if k > n:
                break
            acc += k * D[k] * E[n - k]
        E[n] = acc / n
    return E


def _sincos_rec(D, nz, n_pts):
    S = [_ZERO] * n_pts
    C = [_ZERO] * n_pts
    C[0] = _ONE
    for n in range(1, n_pts):
        s_acc = _ZERO
        c_acc = _ZERO
        for k in nz:
            if k > n:
                break
            s_acc += k * D[k] * C[n - k]
            c_acc -= k * D[k] * S[n - k]
        S[n] = s_acc / n
        C[n] = c_acc / n
    return S, C


def _log1p_rec(W, nz, n_pts):
    L = [_ZERO] * n_pts
    for n in range(1, n_pts):
        acc = _ZERO
        for k in nz:
            if k >= n:
                break
            acc += W[k] * (n - k) * L[n - k]
        L[n] = W[n] - acc / n
    return L


def _pow1p_rec(U, nz, n_pts, p: Fraction):
    P = [_ZERO] * n_pts
    P[0] = _ONE
    for n in range(1, n_pts):
        acc = _ZERO
        for k in nz:
            if k > n:
                break
            acc += (p * k - (n - k)) * U[k] * P[n - k]
        P[n] = acc / n
    return P


def _exact_root(c: Fraction, q: int):
    """Exact ``q``-th root of a positive Fraction, or None."""
    def iroot(m: int):
        r = round(m ** (1.0 / q))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**q == m:
                return cand
        return None

    num, den = iroot(c.numerator), iroot(c.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def coeff_pow(c: Coeff, p: Fraction) -> Coeff:
    """``c**p`` kept exact when the result is rational."""
    if p.denominator == 1:
        if isinstance(c, Fraction):
            return c ** int(p)
        return float(c) ** int(p)
    if c < 0:
        raise DomainError(f"non-integer power {p} of negative coefficient {c}")
    if isinstance(c, Fraction):
        root = _exact_root(c, p.denominator)
        if root is not None:
            return root ** p.numerator
    return float(c) ** float(p)


def elementary_at(name: str, s0: Coeff) -> Coeff:
    """Value of an elementary function at a standard point, exact when trivial."""
    if name == "exp":
        return _ONE if s0 == 0 else math.exp(s0)
    if name == "sin":
        return _ZERO if s0 == 0 else math.sin(s0)
    if name == "cos":
        return _ONE if s0 == 0 else math.cos(s0)
    if name == "log":
        if s0 <= 0:
            raise DomainError(f"log of non-positive standard part {s0}")
        return _ZERO if s0 == 1 else math.log(s0)
    raise ValueError(f"unknown function {name!r}")


SMOOTH_FUNCTIONS = ("exp", "sin", "cos", "log")


def apply_smooth(name: str, s: EpsSeries, order) -> EpsSeries:
    """``f(s)`` for ``f`` in exp/sin/cos/log, expanded about the standard part of ``s``.

    Terms are kept below ``min(order, tail of s)``.  ``exp`` of a series whose
    leading term is ``-c ε^{-a}`` (negative, infinite) is negligible and
    returns exactly zero.
    """
    if not s.terms:
        if s.tail == INF:
            return EpsSeries.const(elementary_at(name, _ZERO))
        if s.tail <= 0:
            raise Undecided(f"{name} of a series whose standard part is unknown", s.tail)
        return EpsSeries.make([(0, elementary_at(name, _ZERO))], tail=s.tail)
    a, c = s.lead
    if a < 0:
        if name == "exp" and c < 0:
            return ZERO
        raise DomainError(f"{name} of a non-near-standard series (leading exponent {a})")
    s0 = c if a == 0 else _ZERO
    delta = [(e, v) for e, v in s.terms if e > 0]
    fs0 = elementary_at(name, s0)
    if not delta:
        return EpsSeries.make([(0, fs0)], tail=s.tail)
    rel = min(Fraction(order), s.tail)
    d = _lattice(e for e, _ in delta)
    n_pts = _npoints(rel, d)
    D, nz = _dense(delta, d, n_pts)
    if name == "exp":
        out = _sparse(_exp_rec(D, nz, n_pts), d, scale=fs0)
    elif name in ("sin", "cos"):
        S, C = _sincos_rec(D, nz, n_pts)
        sin0, cos0 = elementary_at("sin", s0), elementary_at("cos", s0)
        if name == "sin":
            out = _sparse(C, d, sin0) + _sparse(S, d, cos0)
        else:
            out = _sparse(C, d, cos0) + _sparse(S, d, -sin0)
    elif name == "log":
        W = [v / s0 for v in D]
        out = _sparse(_log1p_rec(W, nz, n_pts), d) + [(_ZERO, fs0)]
    else:
        raise ValueError(f"unknown function {name!r}")
    return EpsSeries.make(out, tail=rel)


def apply_pow(s: EpsSeries, p, order) -> EpsSeries:
    """``s**p`` for rational ``p`` via ``c^p ε^{ap} (1+u)^p`` about the leading term.

    The result is exact for monomials; otherwise terms are kept below
    ``max(order, lead + order)`` (at least ``order`` orders past the leading
    exponent of the result) and below the tail inherited from ``s``.
    """
    p = Fraction(p)
    if p == 0:
        return ONE
    if not s.terms:
        if s.tail == INF:
            if p < 0:
                raise NotInvertible("zero branch is not invertible")
            return ZERO
        if p < 0:
            raise NotInvertible("leading term unknown")
        if p.denominator != 1:
            raise UnknownSign("root of a series whose leading sign is unknown", s.tail)
        return EpsSeries.unknown(s.tail * p)
    a, c = s.lead
    if p.denominator != 1 and c < 0:
        raise DomainError(f"non-integer power {p} of a negative series")
    cp = coeff_pow(c, p)
    lead = a * p
    rest = [(e - a, v / c) for e, v in s.terms[1:]]
    if not rest and s.tail == INF:
        return EpsSeries.make([(lead, cp)])
    target = max(Fraction(order), lead + Fraction(order))
    rel = min(s.tail - a, target - lead)
    if not rest:
        return EpsSeries.make([(lead, cp)], tail=lead + rel)
    d = _lattice(e for e, _ in rest)
    n_pts = _npoints(rel, d)
    U, nz = _dense(rest, d, n_pts)
    P = _pow1p_rec(U, nz, n_pts, p)
    return EpsSeries.make(_sparse(P, d, scale=cp, shift=lead), tail=lead + rel)


def invert(s: EpsSeries, order) -> EpsSeries:
    return apply_pow(s, -1, order)


def power_int(s: EpsSeries, n: int, order=None) -> EpsSeries:
    """Integer power by repeated squaring; negative powers go through :func:`invert`."""
    if n < 0:
        if order is None:
            raise ValueError("negative powers need a working order")
        return apply_pow(s, n, order)
    result = ONE
    base = s
    while n:
        if n & 1:
            result = result * base
            if order is not None:
                result = result.truncate(order)
        n >>= 1
        if n:
            base = base * base
            if order is not None:
                base = base.truncate(order)
    return result
