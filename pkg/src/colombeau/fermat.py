"""Fermat reals: little-oh polynomials ``r + Σ α_i t^{a_i}`` modulo ``o(t)``.

Two little-oh polynomials are equal when they differ by ``o(t)``, so every
term with exponent above 1 is discarded during normalization.  The exponents
are exact rationals in ``[0, 1]``.  A smooth ``f`` extends to a Fermat real
by its Taylor expansion about the standard part, which terminates because
the infinitesimal part is nilpotent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError
from .series import CANCEL_TOL, as_coeff, as_exponent, coeff_close, merge_terms

_CUTOFF = Fraction(1)


def _keep(e) -> bool:
    return e <= _CUTOFF


@dataclass(frozen=True, eq=False)
class LittleOhPoly:
    """Canonical Fermat real; build it with :func:`fr_normalize`."""

    terms: tuple = ()

    @property
    def standard_part(self):
        if self.terms and self.terms[0][0] == 0:
            return self.terms[0][1]
        return Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return fr_ring_op("add", self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return fr_ring_op("sub", self, _lift(other))

    def __rsub__(self, other):
        return fr_ring_op("sub", _lift(other), self)

    def __mul__(self, other):
        return fr_ring_op("mul", self, _lift(other))

    __rmul__ = __mul__

    def __neg__(self):
        return LittleOhPoly(tuple((e, -c) for e, c in self.terms))

    def __pow__(self, n: int):
        out = fr_normalize([(0, 1)])
        for _ in range(n):
            out = out * self
        return out

    def __le__(self, other):
        return fr_leq(self, _lift(other))

    def __ge__(self, other):
        return fr_leq(_lift(other), self)

    def __lt__(self, other):
        return not fr_leq(_lift(other), self)

    def __gt__(self, other):
        return not fr_leq(self, _lift(other))

    def __eq__(self, other):
        try:
            other = _lift(other)
        except TypeError:
            return NotImplemented
        return fr_equal(self, other)

    __hash__ = None

    def __str__(self):
        from .literals import format_terms

        return format_terms(self.terms, "t") or "0"

    def __repr__(self):
        return f"LittleOhPoly({str(self)!r})"


def _lift(v) -> LittleOhPoly:
    if isinstance(v, LittleOhPoly):
        return v
    if isinstance(v, (int, float, Fraction)):
        return fr_normalize([(0, v)])
    raise TypeError(f"cannot interpret {v!r} as a Fermat real")


def fr_normalize(raw: Iterable) -> LittleOhPoly:
    """Canonical form: merge equal exponents, drop zero coefficients and ``o(t)`` terms."""
    pairs = []
    for e, c in raw:
        e = as_exponent(e)
        if e < 0:
            raise DomainError(f"negative exponent {e}: not a little-oh polynomial")
        if _keep(e):
            pairs.append((e, as_coeff(c)))
    return LittleOhPoly(merge_terms(pairs))


def fr_ring_op(op: str, a: LittleOhPoly, b: LittleOhPoly) -> LittleOhPoly:
    """Exact term-wise ``add``/``sub``/``mul`` followed by normalization."""
    if op == "add":
        return LittleOhPoly(merge_terms(a.terms + b.terms))
    if op == "sub":
        return LittleOhPoly(merge_terms(a.terms + tuple((e, -c) for e, c in b.terms)))
    if op == "mul":
        pairs = []
        for ea, ca in a.terms:
            for eb, cb in b.terms:
                e = ea + eb
                if not _keep(e):
                    break
                pairs.append((e, ca * cb))
        return LittleOhPoly(merge_terms(pairs))
    raise ValueError(f"unknown ring operation {op!r}")


def fr_equal(a: LittleOhPoly, b: LittleOhPoly, tol: float = CANCEL_TOL) -> bool:
    """Equality of canonical forms: same exponents, coefficients within ``tol``."""
    da, db = dict(a.terms), dict(b.terms)
    return all(coeff_close(da.get(e, 0), db.get(e, 0), tol) for e in set(da) | set(db))


def fr_leq(a: LittleOhPoly, b: LittleOhPoly) -> bool:
    """``a ≤ b``: ``b - a`` is zero or its leading coefficient is positive."""
    d = fr_ring_op("sub", b, a)
    return not d.terms or d.terms[0][1] > 0


def fr_is_first_order(h: LittleOhPoly) -> bool:
    """``h ∈ D`` (``h² = 0``): zero, or every exponent above 1/2."""
    return all(e > Fraction(1, 2) for e, _ in h.terms)


def fr_decompose(x: LittleOhPoly):
    """``(standard part, infinitesimal part)`` with ``x = st + δ``."""
    st = x.standard_part
    return st, LittleOhPoly(tuple(t for t in x.terms if t[0] > 0))


def _as_expr(f):
    from . import expr as E

    if isinstance(f, str):
        f = E.parse_expr(f)
    f = getattr(f, "expr", f)
    if not isinstance(f, E.Expr):
        raise TypeError(f"expected an expression, got {f!r}")
    if E.depends_on(f, "eps"):
        raise ValueError("a standard smooth function may not depend on eps")
    return f


def fr_extend(f, x: LittleOhPoly) -> LittleOhPoly:
    """Value of the extension of the smooth ``f`` at the Fermat real ``x``.

    ``f(st + δ) = Σ_{k ≤ k_max} f^{(k)}(st) δ^k / k!`` with
    ``k_max = floor(1 / a_min)``, ``a_min`` the least exponent of ``δ``; all
    higher powers of ``δ`` vanish.  Raises :class:`DomainError` if ``st`` is
    outside the domain of ``f`` (or of one of the needed derivatives).
    """
    from . import expr as E

    f = _as_expr(f)
    st, delta = fr_decompose(_lift(x))
    terms = [(0, E.eval_real(f, x=st))]
    if delta.is_zero:
        return fr_normalize(terms)
    a_min = delta.terms[0][0]
    k_max = math.floor(1 / a_min)
    out = fr_normalize(terms)
    dk = fr_normalize([(0, 1)])
    deriv = f
    for k in range(1, k_max + 1):
        deriv = E.diff(deriv, "x")
        dk = dk * delta
        if dk.is_zero:
            break
        ck = E.eval_real(deriv, x=st)
        if isinstance(ck, Fraction):
            ck = ck / math.factorial(k)
        else:
            ck = float(ck) / math.factorial(k)
        out = out + LittleOhPoly(tuple((e, c * ck) for e, c in dk.terms if c * ck != 0))
    return out
